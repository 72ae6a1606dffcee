#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hrmod/hr_model.hpp"

namespace hrmod {

enum class MhrRep { Definition, CmDet, MinorDet, PseudoDet, Integral, SpanningTree };
enum class Sigma2Rep { InverseRowsum, DetQuotient, Integral, MaxQuadratic, ThetaSum, Trace };
enum class SetFn { Mhr, Sigma2 };

std::string_view to_string(MhrRep rep);
std::string_view to_string(Sigma2Rep rep);
std::string_view to_string(SetFn fn);
std::optional<MhrRep> parse_mhr_rep(std::string_view name);
std::optional<Sigma2Rep> parse_sigma2_rep(std::string_view name);
std::optional<SetFn> parse_set_fn(std::string_view name);

/// Representations evaluated by default (the quadrature ones are opt-in).
inline constexpr MhrRep kDefaultMhrReps[] = {MhrRep::Definition, MhrRep::CmDet, MhrRep::MinorDet,
                                             MhrRep::PseudoDet, MhrRep::SpanningTree};
inline constexpr Sigma2Rep kDefaultSigma2Reps[] = {Sigma2Rep::InverseRowsum, Sigma2Rep::DetQuotient,
                                                   Sigma2Rep::MaxQuadratic, Sigma2Rep::ThetaSum, Sigma2Rep::Trace};

inline constexpr int kMaxSpanningTreeSet = 8;
inline constexpr int kMaxQuadratureSet = 3;

/// -1/2 log(-det CM(Gamma_{I,I})); 0 for |I| <= 1. Throws NonPositiveArgument
/// if -det CM is not strictly positive.
double m_hr(const Variogram& gamma, IndexSet I);

/// m^HR through one of its equivalent representations. Requires |I| >= 2.
/// `k` selects the reference index for MinorDet and Integral (default: the
/// smallest element of I). Throws UnsupportedSize beyond the size limits of
/// SpanningTree and Integral.
double m_hr_rep(const Variogram& gamma, IndexSet I, MhrRep rep, std::optional<int> k = {});

/// 1 / (2 * 1^T Gamma_{I,I}^{-1} 1); 0 for singletons. I must be nonempty.
double sigma2(const Variogram& gamma, IndexSet I);

/// sigma2 through one of its equivalent representations. Requires |I| >= 2.
/// `k` is the reference index for ThetaSum.
double sigma2_rep(const Variogram& gamma, IndexSet I, Sigma2Rep rep, std::optional<int> k = {});

/// m^HR and sigma2 of every subset of [d], indexed by bitmask. Read-only after
/// construction. d <= 20.
class SubsetTable {
 public:
  static constexpr int kMaxDim = 20;

  explicit SubsetTable(const Variogram& gamma);

  int dim() const { return d_; }
  double m_hr(IndexSet I) const { return mhr_.at(I.mask()); }
  double sigma2(IndexSet I) const;
  /// det CM(Gamma_{I,I}); 1 for the empty set by convention.
  double det_cm(IndexSet I) const { return det_cm_.at(I.mask()); }

 private:
  int d_;
  std::vector<double> mhr_;
  std::vector<double> sigma2_;
  std::vector<double> det_cm_;
};

enum class Modularity { Modular, StrictlyNonModular, Indeterminate };
std::string_view to_string(Modularity m);

struct ModularityReport {
  IndexSet A, B, C;
  SetFn fn = SetFn::Mhr;
  double vABC = 0.0, vC = 0.0, vAC = 0.0, vBC = 0.0;
  // Oriented so the inequality of the respective theorem reads gap >= 0.
  double gap = 0.0;
  double tol_used = kDefaultTol;
  double scale = 1.0;
  Modularity verdict = Modularity::Indeterminate;

  // Only filled for sigma2, on the ABC margin.
  std::optional<Emtp2Check> emtp2;
  std::optional<PSignCheck> p_sign;

  /// gap >= -tol * scale
  bool theorem_side() const { return gap >= -tol_used * scale; }
};

/// Throws BadIndexSets unless A, B, C are nonempty, pairwise disjoint and in [d].
void require_ci_triple(int d, IndexSet A, IndexSet B, IndexSet C);

ModularityReport modularity_gap(const Variogram& gamma, IndexSet A, IndexSet B, IndexSet C, SetFn fn,
                                const Tolerance& tol = {});
/// Table-backed variant for sweeps (hypothesis flags still use the variogram).
ModularityReport modularity_gap(const SubsetTable& table, const Variogram& gamma, IndexSet A, IndexSet B,
                                IndexSet C, SetFn fn, const Tolerance& tol = {});

}  // namespace hrmod
