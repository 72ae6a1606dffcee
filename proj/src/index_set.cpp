#include "hrmod/index_set.hpp"

#include <algorithm>
#include <charconv>

#include "hrmod/error.hpp"

namespace hrmod {

namespace {

void check_index(int i) {
  if (i < 0 || i >= IndexSet::kMaxIndex)
    throw Error(ErrorCode::BadIndexSets, "index " + std::to_string(i) + " out of range");
}

}  // namespace

IndexSet::IndexSet(std::initializer_list<int> elems) {
  for (int i : elems) {
    check_index(i);
    mask_ |= std::uint64_t{1} << i;
  }
}

IndexSet::IndexSet(const std::vector<int>& elems) {
  for (int i : elems) {
    check_index(i);
    mask_ |= std::uint64_t{1} << i;
  }
}

IndexSet IndexSet::full(int d) {
  if (d < 0 || d > kMaxIndex) throw Error(ErrorCode::UnsupportedSize, "dimension " + std::to_string(d));
  return from_mask(d == kMaxIndex ? ~std::uint64_t{0} : (std::uint64_t{1} << d) - 1);
}

IndexSet IndexSet::singleton(int i) {
  check_index(i);
  return from_mask(std::uint64_t{1} << i);
}

IndexSet IndexSet::parse(std::string_view text) {
  IndexSet out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    std::string_view tok = text.substr(pos, next - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty()) throw Error(ErrorCode::BadIndexSets, "empty element in '" + std::string(text) + "'");
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw Error(ErrorCode::BadIndexSets, "not an index: '" + std::string(tok) + "'");
    if (value < 1) throw Error(ErrorCode::BadIndexSets, "indices are 1-based, got " + std::string(tok));
    if (out.contains(value - 1))
      throw Error(ErrorCode::BadIndexSets, "duplicate index " + std::string(tok));
    out = out.with(value - 1);
    pos = next + 1;
  }
  return out;
}

std::vector<int> IndexSet::elements() const {
  std::vector<int> out;
  out.reserve(size());
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

int IndexSet::position(int i) const {
  if (!contains(i)) return -1;
  const std::uint64_t below = i == 0 ? 0 : (mask_ & ((std::uint64_t{1} << i) - 1));
  return std::popcount(below);
}

bool IndexSet::lex_less(IndexSet a, IndexSet b) {
  const auto ea = a.elements();
  const auto eb = b.elements();
  return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

std::string IndexSet::to_list() const {
  std::string out;
  for (int i : elements()) {
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1);
  }
  return out;
}

std::string IndexSet::to_string() const { return "{" + to_list() + "}"; }

std::vector<IndexSet> nonempty_subsets_lex(int d) {
  if (d > 24) throw Error(ErrorCode::UnsupportedSize, "subset enumeration limited to d <= 24");
  std::vector<IndexSet> out;
  const std::uint64_t n = std::uint64_t{1} << d;
  out.reserve(n - 1);
  for (std::uint64_t m = 1; m < n; ++m) out.push_back(IndexSet::from_mask(m));
  std::sort(out.begin(), out.end(), IndexSet::lex_less);
  return out;
}

}  // namespace hrmod
