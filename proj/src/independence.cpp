#include "hrmod/independence.hpp"

#include <algorithm>
#include <cmath>

namespace hrmod {

namespace {

Verdict combine(const std::vector<CriterionResidual>& parts, bool& disagree) {
  bool any_holds = false, any_fails = false, any_indet = false;
  for (const auto& c : parts) {
    any_holds |= c.verdict == Verdict::Holds;
    any_fails |= c.verdict == Verdict::Fails;
    any_indet |= c.verdict == Verdict::Indeterminate;
  }
  disagree = any_holds && any_fails;
  if (disagree || any_indet) return Verdict::Indeterminate;
  return any_holds ? Verdict::Holds : Verdict::Fails;
}

CriterionResidual criterion(std::string name, double residual, double scale, const Tolerance& tol) {
  return {std::move(name), residual, scale, classify_residual(residual, scale, tol)};
}

Verdict from_modularity(Modularity m) {
  switch (m) {
    case Modularity::Modular: return Verdict::Holds;
    case Modularity::StrictlyNonModular: return Verdict::Fails;
    case Modularity::Indeterminate: return Verdict::Indeterminate;
  }
  return Verdict::Indeterminate;
}

template <class DetCM>
CIVerdict mhr_verdict(const ModularityReport& report, const CIStatement& s, const Tolerance& tol, DetCM&& det_cm) {
  CIVerdict v;
  v.statement = s;
  v.method = CIMethod::MhrModularity;
  v.modularity = report;
  v.diagnostics.push_back({"mhr-gap", report.gap, report.scale, from_modularity(report.verdict)});

  const double lhs = det_cm(s.A | s.B | s.C) * det_cm(s.C);
  const double rhs = det_cm(s.A | s.C) * det_cm(s.B | s.C);
  const double denom = std::max(std::abs(lhs), std::abs(rhs));
  const double residual = denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
  v.diagnostics.push_back(criterion("cm-det-product", residual, report.scale, tol));

  bool disagree = false;
  v.verdict = combine(v.diagnostics, disagree);
  if (!report.theorem_side()) v.notes.push_back("m^HR gap is negative beyond tolerance");
  if (disagree) throw CriterionDisagreement(v);
  return v;
}

}  // namespace

std::string CIStatement::to_string() const {
  return A.to_string() + " _||_ " + B.to_string() + " | " + C.to_string();
}

std::string_view to_string(CIMethod m) {
  switch (m) {
    case CIMethod::Singleton4Way: return "singleton-4way";
    case CIMethod::MhrModularity: return "mhr-modularity";
    case CIMethod::CmDetProduct: return "cm-det-product";
    case CIMethod::Sigma2Modularity: return "sigma2-modularity";
  }
  return "unknown";
}

CriterionDisagreement::CriterionDisagreement(CIVerdict v)
    : Error(ErrorCode::CriterionDisagreement, "criteria disagree on " + v.statement.to_string()),
      verdict_(std::move(v)) {}

CIVerdict ci_singleton(const Variogram& gamma, int i, int j, IndexSet C, const Tolerance& tol) {
  const int d = gamma.dim();
  if (i == j) throw Error(ErrorCode::BadIndexSets, "i and j must differ");
  require_ci_triple(d, IndexSet::singleton(i), IndexSet::singleton(j), C);

  CIVerdict v;
  v.statement = {IndexSet::singleton(i), IndexSet::singleton(j), C};
  v.method = CIMethod::Singleton4Way;

  const IndexSet Cij = C.with(i).with(j);
  const auto block = fiedler_bapat(gamma, Cij);
  const int pi = Cij.position(i), pj = Cij.position(j);
  const double theta_scale = std::sqrt(block.theta(pi, pi) * block.theta(pj, pj));
  v.diagnostics.push_back(criterion("theta-margin", block.theta(pi, pj) / theta_scale, 1.0, tol));

  // Criteria (iii) and (iv) are normalized like (ii): each numerator divided
  // by the geometric mean of its two diagonal counterparts is the same
  // conditional correlation of Y_i and Y_j given Y_C, so all three residuals
  // are scale-free and directly comparable. Rows and columns come in sorted
  // order; `aligned` moves the unmatched row and column to the front so the
  // shared indices line up, fixing the sign.
  auto aligned = [](IndexSet rows, int a, IndexSet cols, int b) {
    return (rows.position(a) + cols.position(b)) % 2 ? -1.0 : 1.0;
  };
  const IndexSet Ci = C.with(i), Cj = C.with(j);
  const int n = C.size() + 1;
  Matrix cm = Matrix::Zero(n + 1, n + 1);
  cm.topLeftCorner(n, n) = -0.5 * submatrix(gamma.matrix().dense(), Ci, Cj);
  cm.topRightCorner(n, 1).setOnes();
  cm.bottomLeftCorner(1, n).setOnes();
  const double cm_scale = std::sqrt(det(cayley_menger(gamma, Ci)) * det(cayley_menger(gamma, Cj)));
  v.diagnostics.push_back(criterion("cm-det", aligned(Ci, i, Cj, j) * det(cm) / cm_scale, 1.0, tol));

  const auto full = fiedler_bapat(gamma);
  const IndexSet all = IndexSet::full(d);
  const Matrix& theta = full.theta.dense();
  const double minor_scale =
      std::sqrt(det(submatrix(theta, all - Ci, all - Ci)) * det(submatrix(theta, all - Cj, all - Cj)));
  v.diagnostics.push_back(criterion("theta-minor",
                                      aligned(all - Ci, j, all - Cj, i) * det(submatrix(theta, all - Ci, all - Cj)) / minor_scale, 1.0, tol));
  if (Cij == all) v.notes.push_back("C, i, j cover [d]: the minor criterion reduces to Theta_ij");

  bool disagree = false;
  v.verdict = combine(v.diagnostics, disagree);
  if (disagree) throw CriterionDisagreement(v);
  return v;
}

CIVerdict ci_general_mhr(const Variogram& gamma, const CIStatement& s, const Tolerance& tol) {
  const auto report = modularity_gap(gamma, s.A, s.B, s.C, SetFn::Mhr, tol);
  return mhr_verdict(report, s, tol, [&](IndexSet I) { return det(cayley_menger(gamma, I)); });
}

CIVerdict ci_general_mhr(const SubsetTable& table, const Variogram& gamma, const CIStatement& s,
                         const Tolerance& tol) {
  const auto report = modularity_gap(table, gamma, s.A, s.B, s.C, SetFn::Mhr, tol);
  return mhr_verdict(report, s, tol, [&](IndexSet I) { return table.det_cm(I); });
}

CIVerdict ci_sigma2(const Variogram& gamma, const CIStatement& s, const Tolerance& tol) {
  const auto report = modularity_gap(gamma, s.A, s.B, s.C, SetFn::Sigma2, tol);
  CIVerdict v;
  v.statement = s;
  v.method = CIMethod::Sigma2Modularity;
  v.modularity = report;
  v.emtp2_on_margin = report.emtp2->holds;
  v.p_positive_on_margin = report.p_sign->positive;
  v.p_nonneg_on_margin = report.p_sign->nonnegative;
  v.applicable = *v.emtp2_on_margin && *v.p_positive_on_margin;
  v.diagnostics.push_back({"sigma2-gap", report.gap, report.scale, from_modularity(report.verdict)});
  if (report.emtp2->boundary) v.notes.push_back("largest off-diagonal precision entry is within tolerance of 0");

  if (v.applicable) {
    v.verdict = from_modularity(report.verdict);
  } else {
    v.verdict = Verdict::Indeterminate;
    if (*v.emtp2_on_margin && *v.p_nonneg_on_margin) {
      v.notes.push_back("p has a zero entry: submodularity holds but modularity does not decide CI");
      if (!report.theorem_side()) v.notes.push_back("sigma2 gap is negative beyond tolerance");
    } else {
      v.notes.push_back("EMTP2 and p > 0 are required on the ABC margin");
    }
  }
  return v;
}

double q_polynomial(const FiedlerBapatBlock& block, int i, int j) {
  const auto& t = block.theta;
  const auto& p = block.p;
  const double tii = t(i, i), tjj = t(j, j), tij = t(i, j);
  const double bracket = p(i) * p(i) * tij * tjj - 2.0 * p(i) * p(j) * tii * tjj + p(j) * p(j) * tii * tij;
  return tij / (tii * tjj * (tii * tjj - tij * tij)) * bracket;
}

MarkovGraph pairwise_markov_graph(const Variogram& gamma, const Tolerance& tol) {
  const auto block = fiedler_bapat(gamma);
  const double scale = floor_scale({block.theta.max_abs()});
  MarkovGraph g(gamma.dim());
  for (int i = 0; i < gamma.dim(); ++i)
    for (int j = i + 1; j < gamma.dim(); ++j)
      if (!tol.is_zero(block.theta(i, j), scale)) g.add_edge(i, j, -block.theta(i, j));
  return g;
}

std::vector<CIStatement> all_ci_statements(int d) {
  if (d > 12) throw Error(ErrorCode::TooLarge, "statement enumeration limited to d <= 12");
  std::vector<CIStatement> out;
  // Each index is unused (0) or belongs to A (1), B (2), C (3).
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= 4;
  for (std::size_t code = 0; code < total; ++code) {
    std::uint64_t a = 0, b = 0, c = 0;
    std::size_t x = code;
    for (int i = 0; i < d; ++i, x /= 4) {
      const auto bit = std::uint64_t{1} << i;
      switch (x % 4) {
        case 1: a |= bit; break;
        case 2: b |= bit; break;
        case 3: c |= bit; break;
        default: break;
      }
    }
    const auto A = IndexSet::from_mask(a), B = IndexSet::from_mask(b), C = IndexSet::from_mask(c);
    if (A.empty() || B.empty() || C.empty() || !IndexSet::lex_less(A, B)) continue;
    out.push_back({A, B, C});
  }
  std::sort(out.begin(), out.end(), [](const CIStatement& l, const CIStatement& r) {
    if (l.A != r.A) return IndexSet::lex_less(l.A, r.A);
    if (l.B != r.B) return IndexSet::lex_less(l.B, r.B);
    return IndexSet::lex_less(l.C, r.C);
  });
  return out;
}

GlobalMarkovReport check_global_markov(const Variogram& gamma, const MarkovGraph& g, int max_d,
                                       const Tolerance& tol) {
  const int d = gamma.dim();
  if (d > max_d) throw Error(ErrorCode::TooLarge, "global Markov sweep limited to d <= " + std::to_string(max_d));
  if (g.num_vertices() != d) throw Error(ErrorCode::BadGraph, "graph and model dimensions differ");

  const SubsetTable table(gamma);
  GlobalMarkovReport report;
  for (const auto& s : all_ci_statements(d)) {
    if (!g.separates(s.C, s.A, s.B)) continue;
    ++report.separated_statements;
    try {
      auto v = ci_general_mhr(table, gamma, s, tol);
      if (v.verdict == Verdict::Fails) report.violations.push_back(std::move(v));
      else if (v.verdict == Verdict::Indeterminate) report.indeterminate.push_back(std::move(v));
    } catch (const CriterionDisagreement& e) {
      report.disagreements.push_back(e.verdict());
    }
  }
  return report;
}

}  // namespace hrmod
