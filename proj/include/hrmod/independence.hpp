#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrmod/graph.hpp"
#include "hrmod/set_functions.hpp"

namespace hrmod {

/// Query Y_A independent of Y_B given Y_C (extremal sense).
struct CIStatement {
  IndexSet A, B, C;

  /// "{1} _||_ {3} | {2,4}"
  std::string to_string() const;
};

enum class CIMethod { Singleton4Way, MhrModularity, CmDetProduct, Sigma2Modularity };
std::string_view to_string(CIMethod m);

/// One scale-free residual and its verdict under the shared tolerance.
struct CriterionResidual {
  std::string name;
  double residual = 0.0;
  double scale = 1.0;
  Verdict verdict = Verdict::Indeterminate;
};

struct CIVerdict {
  CIStatement statement;
  CIMethod method = CIMethod::MhrModularity;
  Verdict verdict = Verdict::Indeterminate;
  std::vector<CriterionResidual> diagnostics;
  std::optional<ModularityReport> modularity;

  // Theorem hypotheses on the ABC margin; only set by the sigma2 criterion.
  bool applicable = true;
  std::optional<bool> emtp2_on_margin;
  std::optional<bool> p_positive_on_margin;
  std::optional<bool> p_nonneg_on_margin;

  std::vector<std::string> notes;

  bool holds() const { return verdict == Verdict::Holds; }
};

/// Thrown when criteria that must coincide give Holds and Fails at the same
/// tolerance. Carries the full verdict with all residuals.
class CriterionDisagreement : public Error {
 public:
  explicit CriterionDisagreement(CIVerdict v);
  const CIVerdict& verdict() const noexcept { return verdict_; }

 private:
  CIVerdict verdict_;
};

/// Singleton statement i _||_ j | C through three equivalent criteria, each
/// a numerator over the geometric mean of its diagonal counterparts:
///   Theta(Cij)_ij (diagonal Theta(Cij)_ii, Theta(Cij)_jj),
///   det CM(Gamma_{Ci,Cj}) (det CM of Gamma_{Ci,Ci} and Gamma_{Cj,Cj}),
///   det Theta_{\Ci,\Cj} of the full precision matrix (det Theta_{\Ci,\Ci}, det Theta_{\Cj,\Cj}).
CIVerdict ci_singleton(const Variogram& gamma, int i, int j, IndexSet C, const Tolerance& tol = {});

/// General statement through modularity of m^HR, cross-checked with the
/// determinant-product identity det CM(ABC) det CM(C) = det CM(AC) det CM(BC).
CIVerdict ci_general_mhr(const Variogram& gamma, const CIStatement& s, const Tolerance& tol = {});
CIVerdict ci_general_mhr(const SubsetTable& table, const Variogram& gamma, const CIStatement& s,
                         const Tolerance& tol = {});

/// General statement through modularity of sigma2. Decides only when the ABC
/// margin is EMTP2 with p > 0; otherwise the verdict is Indeterminate.
CIVerdict ci_sigma2(const Variogram& gamma, const CIStatement& s, const Tolerance& tol = {});

/// q_{ij|rest}(Theta, p) for a four-dimensional block, indices local to it.
/// Its zero set describes the sigma2 modularity equation of {i}, {j} given
/// the other two indices.
double q_polynomial(const FiedlerBapatBlock& block, int i, int j);

/// Edge ij iff |Theta_ij| > tol * max(1, max |Theta|); weight -Theta_ij.
MarkovGraph pairwise_markov_graph(const Variogram& gamma, const Tolerance& tol = {});

struct GlobalMarkovReport {
  int separated_statements = 0;
  std::vector<CIVerdict> violations;     // separated but CI fails
  std::vector<CIVerdict> indeterminate;  // inside the indeterminate band
  std::vector<CIVerdict> disagreements;  // criteria contradicted each other

  bool passes() const { return violations.empty() && disagreements.empty(); }
};

inline constexpr int kDefaultGlobalMarkovMaxD = 7;

/// Runs ci_general_mhr on every disjoint nonempty (A, B, C) with A before B
/// lexicographically and C separating A from B in G. Throws TooLarge when
/// d > max_d.
GlobalMarkovReport check_global_markov(const Variogram& gamma, const MarkovGraph& g,
                                       int max_d = kDefaultGlobalMarkovMaxD, const Tolerance& tol = {});

/// Every statement (A, B, C) of pairwise disjoint nonempty subsets of [d]
/// with A before B lexicographically, in canonical order.
std::vector<CIStatement> all_ci_statements(int d);

}  // namespace hrmod
