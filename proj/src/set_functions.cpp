#include "hrmod/set_functions.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "hrmod/graph.hpp"
#include "hrmod/quadrature.hpp"

namespace hrmod {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
// Eigenvalues below this fraction of the spectral radius count as the kernel.
constexpr double kPseudoDetRankTol = 1e-10;

void require_subset(const Variogram& gamma, IndexSet I) {
  if (!I.is_subset_of(IndexSet::full(gamma.dim())))
    throw Error(ErrorCode::BadIndexSets, "subset " + I.to_string() + " exceeds the dimension");
}

void require_pair_or_larger(const Variogram& gamma, IndexSet I) {
  require_subset(gamma, I);
  if (I.size() < 2) throw Error(ErrorCode::UnsupportedSize, "representations need |I| >= 2");
}

int local_reference(IndexSet I, std::optional<int> k) {
  const int ref = k.value_or(I.elements().front());
  const int pos = I.position(ref);
  if (pos < 0) throw Error(ErrorCode::BadIndexSets, "reference index not in the subset");
  return pos;
}

double checked_half_log(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorCode::NonPositiveArgument, std::string(what) + " is not strictly positive");
  return 0.5 * std::log(x);
}

double mhr_from_det_cm(double det_cm) { return -checked_half_log(-det_cm, "-det CM"); }

double mhr_definition(const Variogram& gamma, IndexSet I) {
  const int n = I.size();
  Matrix m = Matrix::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = -0.5 * gamma.matrix().sub(I).dense();
  m.topRightCorner(n, 1).setOnes();
  m.bottomLeftCorner(1, n).setConstant(-1.0);
  return -checked_half_log(det(m), "det of the sign-flipped Cayley–Menger matrix");
}

double mhr_spanning_tree(const SymMatrix& theta) {
  const int n = theta.dim();
  if (n > kMaxSpanningTreeSet) throw Error(ErrorCode::UnsupportedSize, "spanning-tree representation needs |I| <= 8");
  // Signed weights cancel heavily on ill-conditioned Theta (terms can exceed
  // the sum by 8+ orders of magnitude), so accumulate in quad precision.
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  Quad total = 0;
  for_each_spanning_tree(MarkovGraph::complete(n), [&](const SpanningTree& tree) {
    Quad prod = 1;
    for (const auto& e : tree) prod *= -theta(e.u, e.v);
    total += prod;
  });
  return checked_half_log(total.convert_to<double>(), "spanning-tree sum");
}

// Unconstrained concave maximization on the affine hyperplane 1^T x = 1,
// parametrized as x = 1/n + P z with P an orthonormal basis of 1-perp.
double sigma2_max_quadratic(const SymMatrix& g) {
  const int n = g.dim();
  const Matrix P = ones_complement_basis(n);
  const Vector x0 = Vector::Constant(n, 1.0 / n);
  const Matrix H = -(P.transpose() * g.dense() * P);
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotCND, "projected variogram is not negative definite");
  const Vector z = llt.solve(P.transpose() * g.dense() * x0);
  const Vector x = x0 + P * z;
  return 0.5 * x.dot(g.dense() * x);
}

}  // namespace

std::string_view to_string(MhrRep rep) {
  switch (rep) {
    case MhrRep::Definition: return "definition";
    case MhrRep::CmDet: return "cm-det";
    case MhrRep::MinorDet: return "minor-det";
    case MhrRep::PseudoDet: return "pseudo-det";
    case MhrRep::Integral: return "integral";
    case MhrRep::SpanningTree: return "spanning-tree";
  }
  return "unknown";
}

std::string_view to_string(Sigma2Rep rep) {
  switch (rep) {
    case Sigma2Rep::InverseRowsum: return "inverse-rowsum";
    case Sigma2Rep::DetQuotient: return "det-quotient";
    case Sigma2Rep::Integral: return "integral";
    case Sigma2Rep::MaxQuadratic: return "max-quadratic";
    case Sigma2Rep::ThetaSum: return "theta-sum";
    case Sigma2Rep::Trace: return "trace";
  }
  return "unknown";
}

std::string_view to_string(SetFn fn) { return fn == SetFn::Mhr ? "mhr" : "sigma2"; }

std::optional<MhrRep> parse_mhr_rep(std::string_view name) {
  for (auto r : {MhrRep::Definition, MhrRep::CmDet, MhrRep::MinorDet, MhrRep::PseudoDet, MhrRep::Integral,
                 MhrRep::SpanningTree})
    if (to_string(r) == name) return r;
  return std::nullopt;
}

std::optional<Sigma2Rep> parse_sigma2_rep(std::string_view name) {
  for (auto r : {Sigma2Rep::InverseRowsum, Sigma2Rep::DetQuotient, Sigma2Rep::Integral, Sigma2Rep::MaxQuadratic,
                 Sigma2Rep::ThetaSum, Sigma2Rep::Trace})
    if (to_string(r) == name) return r;
  return std::nullopt;
}

std::optional<SetFn> parse_set_fn(std::string_view name) {
  if (name == "mhr") return SetFn::Mhr;
  if (name == "sigma2") return SetFn::Sigma2;
  return std::nullopt;
}

std::string_view to_string(Modularity m) {
  switch (m) {
    case Modularity::Modular: return "modular";
    case Modularity::StrictlyNonModular: return "strictly-non-modular";
    case Modularity::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

double m_hr(const Variogram& gamma, IndexSet I) {
  require_subset(gamma, I);
  if (I.size() <= 1) return 0.0;
  return mhr_from_det_cm(det(cayley_menger(gamma, I)));
}

double m_hr_rep(const Variogram& gamma, IndexSet I, MhrRep rep, std::optional<int> k) {
  require_pair_or_larger(gamma, I);
  switch (rep) {
    case MhrRep::Definition: return mhr_definition(gamma, I);
    case MhrRep::CmDet: return m_hr(gamma, I);
    case MhrRep::MinorDet: {
      const int pos = local_reference(I, k);
      const auto block = fiedler_bapat(gamma, I);
      const IndexSet rest = IndexSet::full(I.size()).without(pos);
      return checked_half_log(det(block.theta.sub(rest)), "precision minor");
    }
    case MhrRep::PseudoDet: {
      const auto block = fiedler_bapat(gamma, I);
      return checked_half_log(pseudo_det(block.theta, kPseudoDetRankTol), "pseudo-determinant") -
             0.5 * std::log(static_cast<double>(I.size()));
    }
    case MhrRep::Integral: {
      if (I.size() > kMaxQuadratureSet) throw Error(ErrorCode::UnsupportedSize, "integral representation needs |I| <= 3");
      const int pos = local_reference(I, k);
      const double mass = halfspace_kernel_integral(gamma.restricted(I), pos);
      return -std::log(mass) + 0.5 * (I.size() - 1) * kLog2Pi;
    }
    case MhrRep::SpanningTree: {
      if (I.size() > kMaxSpanningTreeSet)
        throw Error(ErrorCode::UnsupportedSize, "spanning-tree representation needs |I| <= 8");
      return mhr_spanning_tree(fiedler_bapat(gamma, I).theta);
    }
  }
  throw Error(ErrorCode::BadIndexSets, "unknown representation");
}

double sigma2(const Variogram& gamma, IndexSet I) {
  require_subset(gamma, I);
  if (I.empty()) throw Error(ErrorCode::BadIndexSets, "sigma2 needs a nonempty subset");
  if (I.size() == 1) return 0.0;
  return explicit_p_sigma2(gamma, I).sigma2;
}

double sigma2_rep(const Variogram& gamma, IndexSet I, Sigma2Rep rep, std::optional<int> k) {
  require_pair_or_larger(gamma, I);
  const SymMatrix g = gamma.matrix().sub(I);
  const int n = I.size();
  switch (rep) {
    case Sigma2Rep::InverseRowsum: return sigma2(gamma, I);
    case Sigma2Rep::DetQuotient: {
      const SymMatrix half(-0.5 * g.dense());
      return det(half) / det(cayley_menger(gamma, I));
    }
    case Sigma2Rep::Integral: {
      if (n > kMaxQuadratureSet) throw Error(ErrorCode::UnsupportedSize, "integral representation needs |I| <= 3");
      return -2.0 * std::log(circumcenter_halfspace_mass(gamma.restricted(I)));
    }
    case Sigma2Rep::MaxQuadratic: return sigma2_max_quadratic(g);
    case Sigma2Rep::ThetaSum: {
      const int pos = local_reference(I, k);
      const auto block = fiedler_bapat(gamma, I);
      // Sum over ordered pairs counts every unordered pair twice.
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double diff = g(i, pos) - g(j, pos);
          s += block.theta(i, j) * diff * diff;
        }
      return -s / 8.0;
    }
    case Sigma2Rep::Trace: {
      const auto block = fiedler_bapat(gamma, I);
      return (g.dense() * block.theta.dense() * g.dense()).trace() / (4.0 * n);
    }
  }
  throw Error(ErrorCode::BadIndexSets, "unknown representation");
}

SubsetTable::SubsetTable(const Variogram& gamma) : d_(gamma.dim()) {
  if (d_ > kMaxDim) throw Error(ErrorCode::TooLarge, "subset table limited to d <= 20");
  const std::size_t count = std::size_t{1} << d_;
  mhr_.assign(count, 0.0);
  sigma2_.assign(count, 0.0);
  det_cm_.assign(count, 1.0);
  for (std::size_t mask = 1; mask < count; ++mask) {
    const IndexSet I = IndexSet::from_mask(mask);
    det_cm_[mask] = det(cayley_menger(gamma, I));
    if (I.size() >= 2) {
      mhr_[mask] = mhr_from_det_cm(det_cm_[mask]);
      sigma2_[mask] = explicit_p_sigma2(gamma, I).sigma2;
    }
  }
}

double SubsetTable::sigma2(IndexSet I) const {
  if (I.empty()) throw Error(ErrorCode::BadIndexSets, "sigma2 needs a nonempty subset");
  return sigma2_.at(I.mask());
}

void require_ci_triple(int d, IndexSet A, IndexSet B, IndexSet C) {
  if (A.empty() || B.empty() || C.empty())
    throw Error(ErrorCode::BadIndexSets, "A, B and C must be nonempty");
  if (!A.disjoint(B) || !A.disjoint(C) || !B.disjoint(C))
    throw Error(ErrorCode::BadIndexSets, "A, B and C must be pairwise disjoint");
  if (!(A | B | C).is_subset_of(IndexSet::full(d)))
    throw Error(ErrorCode::BadIndexSets, "index out of range for d = " + std::to_string(d));
}

namespace {

template <class Values>
ModularityReport build_report(const Variogram& gamma, IndexSet A, IndexSet B, IndexSet C, SetFn fn,
                              const Tolerance& tol, Values&& value) {
  require_ci_triple(gamma.dim(), A, B, C);
  ModularityReport r;
  r.A = A;
  r.B = B;
  r.C = C;
  r.fn = fn;
  r.vABC = value(A | B | C);
  r.vC = value(C);
  r.vAC = value(A | C);
  r.vBC = value(B | C);
  r.gap = fn == SetFn::Mhr ? (r.vABC + r.vC - r.vAC - r.vBC) : (r.vAC + r.vBC - r.vABC - r.vC);
  r.tol_used = tol.rel;
  r.scale = floor_scale({r.vABC, r.vC, r.vAC, r.vBC});
  switch (classify_residual(r.gap, r.scale, tol)) {
    case Verdict::Holds: r.verdict = Modularity::Modular; break;
    case Verdict::Fails: r.verdict = Modularity::StrictlyNonModular; break;
    case Verdict::Indeterminate: r.verdict = Modularity::Indeterminate; break;
  }
  if (fn == SetFn::Sigma2) {
    const auto block = fiedler_bapat(gamma, A | B | C);
    r.emtp2 = is_emtp2(block.theta, tol);
    r.p_sign = p_sign(block.p, tol);
  }
  return r;
}

}  // namespace

ModularityReport modularity_gap(const Variogram& gamma, IndexSet A, IndexSet B, IndexSet C, SetFn fn,
                                const Tolerance& tol) {
  return build_report(gamma, A, B, C, fn, tol,
                      [&](IndexSet I) { return fn == SetFn::Mhr ? m_hr(gamma, I) : sigma2(gamma, I); });
}

ModularityReport modularity_gap(const SubsetTable& table, const Variogram& gamma, IndexSet A, IndexSet B,
                                IndexSet C, SetFn fn, const Tolerance& tol) {
  if (table.dim() != gamma.dim()) throw Error(ErrorCode::BadIndexSets, "table and variogram dimensions differ");
  return build_report(gamma, A, B, C, fn, tol,
                      [&](IndexSet I) { return fn == SetFn::Mhr ? table.m_hr(I) : table.sigma2(I); });
}

}  // namespace hrmod
