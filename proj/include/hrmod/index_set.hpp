#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace hrmod {

/// Subset of {0, ..., 63} stored as a bitmask. Indices are zero-based in the
/// library; the 1-based convention only appears at the text boundary
/// (to_string / parse).
class IndexSet {
 public:
  static constexpr int kMaxIndex = 64;

  constexpr IndexSet() = default;
  IndexSet(std::initializer_list<int> elems);
  explicit IndexSet(const std::vector<int>& elems);

  static constexpr IndexSet from_mask(std::uint64_t mask) {
    IndexSet s;
    s.mask_ = mask;
    return s;
  }
  /// {0, ..., d-1}
  static IndexSet full(int d);
  static IndexSet singleton(int i);

  /// Parses a 1-based comma list such as "1,2,4"; an empty string gives {}.
  static IndexSet parse(std::string_view text);

  constexpr std::uint64_t mask() const { return mask_; }
  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }
  bool contains(int i) const { return i >= 0 && i < kMaxIndex && ((mask_ >> i) & 1u); }
  /// Largest element plus one, 0 for the empty set.
  int bound() const { return mask_ == 0 ? 0 : kMaxIndex - std::countl_zero(mask_); }

  /// Sorted ascending.
  std::vector<int> elements() const;
  /// Position of element i within elements(), or -1.
  int position(int i) const;

  bool is_subset_of(IndexSet other) const { return (mask_ & ~other.mask_) == 0; }
  bool disjoint(IndexSet other) const { return (mask_ & other.mask_) == 0; }

  IndexSet operator|(IndexSet o) const { return from_mask(mask_ | o.mask_); }
  IndexSet operator&(IndexSet o) const { return from_mask(mask_ & o.mask_); }
  IndexSet operator-(IndexSet o) const { return from_mask(mask_ & ~o.mask_); }
  IndexSet with(int i) const { return *this | singleton(i); }
  IndexSet without(int i) const { return *this - singleton(i); }

  bool operator==(const IndexSet&) const = default;

  /// Lexicographic comparison of the sorted element sequences.
  static bool lex_less(IndexSet a, IndexSet b);

  /// "{1,2,4}" (1-based).
  std::string to_string() const;
  /// "1,2,4" (1-based), the format accepted by parse().
  std::string to_list() const;

 private:
  std::uint64_t mask_ = 0;
};

/// All nonempty subsets of {0..d-1} in lexicographic order of their sorted
/// element sequences.
std::vector<IndexSet> nonempty_subsets_lex(int d);

}  // namespace hrmod
