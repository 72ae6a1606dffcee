#include "hrmod/hr_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hrmod {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

// Agreement required between the two routes to p and sigma2. Only a gross
// mismatch (a singular or corrupted Cayley–Menger matrix) trips it; the test
// suite checks the routes at 1e-9.
constexpr double kRouteAgreement = 1e-6;

void require_margin(IndexSet I, int d) {
  if (I.empty()) throw Error(ErrorCode::BadIndexSets, "empty margin");
  if (!I.is_subset_of(IndexSet::full(d)))
    throw Error(ErrorCode::BadIndexSets, "margin " + I.to_string() + " exceeds dimension " + std::to_string(d));
}

}  // namespace

ValidationResult validate_variogram(const Matrix& m, const Tolerance& tol) {
  ValidationResult out;
  auto fail = [&](ErrorCode code, std::string msg, double value) {
    out.error = code;
    out.message = std::move(msg);
    out.offending_value = value;
    return out;
  };
  if (m.rows() != m.cols())
    return fail(ErrorCode::NotSquare, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()), 0.0);
  const int d = static_cast<int>(m.rows());
  if (d < 2) return fail(ErrorCode::UnsupportedSize, "a variogram needs dimension >= 2", 0.0);
  if (!m.allFinite()) return fail(ErrorCode::NotSymmetric, "matrix has non-finite entries", 0.0);

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!tol.is_zero(m(i, j) - m(j, i), scale))
        return fail(ErrorCode::NotSymmetric,
                    "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") differ",
                    m(i, j) - m(j, i));
  for (int i = 0; i < d; ++i)
    if (!tol.is_zero(m(i, i), scale))
      return fail(ErrorCode::NonzeroDiagonal, "diagonal entry " + std::to_string(i + 1) + " is nonzero", m(i, i));

  Matrix g = 0.5 * (m + m.transpose());
  g.diagonal().setZero();

  const Matrix basis = ones_complement_basis(d);
  const SymMatrix projected(basis.transpose() * (-g) * basis);
  const auto eig = eigen_sym(projected);
  const double min_eig = eig.values(0);
  if (!(min_eig > tol.rel * scale))
    return fail(ErrorCode::NotCND, "not conditionally negative definite (projected eigenvalue of Gamma is " +
                                       std::to_string(-min_eig) + ")",
                -min_eig);

  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!(g(i, j) > 0.0))
        return fail(ErrorCode::NotCND, "off-diagonal entry is not positive", g(i, j));

  out.variogram = Variogram(SymMatrix(g));
  return out;
}

Variogram Variogram::from_matrix(const Matrix& m, const Tolerance& tol) {
  auto res = validate_variogram(m, tol);
  if (!res.ok()) throw Error(*res.error, res.message);
  return std::move(*res.variogram);
}

Variogram Variogram::restricted(IndexSet I) const {
  require_margin(I, dim());
  if (I.size() < 2) throw Error(ErrorCode::BadIndexSets, "a restricted variogram needs at least two indices");
  return Variogram(gamma_.sub(I));
}

Variogram Variogram::scaled(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonPositiveArgument, "scale factor must be positive");
  return Variogram(SymMatrix(t * gamma_.dense()));
}

BorderedMatrix cayley_menger(const SymMatrix& gamma) {
  return BorderedMatrix{SymMatrix(-0.5 * gamma.dense()), Vector::Ones(gamma.dim()), 0.0};
}

BorderedMatrix cayley_menger(const Variogram& gamma, IndexSet I) {
  require_margin(I, gamma.dim());
  return cayley_menger(gamma.matrix().sub(I));
}

SymMatrix FiedlerBapatBlock::joined() const {
  const int n = theta.dim();
  Matrix out(n + 1, n + 1);
  out.topLeftCorner(n, n) = theta.dense();
  out.topRightCorner(n, 1) = p;
  out.bottomLeftCorner(1, n) = p.transpose();
  out(n, n) = sigma2;
  return SymMatrix(out);
}

ExplicitPSigma explicit_p_sigma2(const Variogram& gamma, IndexSet I) {
  require_margin(I, gamma.dim());
  if (I.size() == 1) return {Vector::Ones(1), 0.0};
  const Matrix g = gamma.matrix().sub(I).dense();
  const Vector w = g.fullPivLu().solve(Vector::Ones(g.rows()));
  const double s = w.sum();
  return {w / s, 0.5 / s};
}

FiedlerBapatBlock fiedler_bapat(const Variogram& gamma, IndexSet I) {
  require_margin(I, gamma.dim());
  const int n = I.size();
  if (n == 1) return {I, SymMatrix::zero(1), Vector::Ones(1), 0.0};

  const Matrix cm = cayley_menger(gamma, I).assemble();
  Eigen::FullPivLU<Matrix> lu(cm);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularCM, "Cayley–Menger matrix of " + I.to_string() + " is singular");
  const Matrix inv = lu.inverse();

  FiedlerBapatBlock block{I, SymMatrix(inv.topLeftCorner(n, n)),
                          0.5 * (inv.topRightCorner(n, 1) + inv.bottomLeftCorner(1, n).transpose()), inv(n, n)};

  const auto explicit_route = explicit_p_sigma2(gamma, I);
  const double p_gap = (explicit_route.p - block.p).cwiseAbs().maxCoeff();
  const double s_gap = std::abs(explicit_route.sigma2 - block.sigma2);
  if (p_gap > kRouteAgreement * std::max(1.0, block.p.cwiseAbs().maxCoeff()) ||
      s_gap > kRouteAgreement * std::max(1.0, std::abs(block.sigma2)))
    throw Error(ErrorCode::SingularCM, "inverse Cayley–Menger blocks of " + I.to_string() +
                                           " disagree with the explicit formulas");
  return block;
}

FiedlerBapatBlock fiedler_bapat(const Variogram& gamma) { return fiedler_bapat(gamma, IndexSet::full(gamma.dim())); }

FiedlerBapatBlock marginal_block_via_schur(const FiedlerBapatBlock& full, IndexSet I) {
  const int d = full.theta.dim();
  if (full.margin != IndexSet::full(d))
    throw Error(ErrorCode::BadIndexSets, "marginalization needs the block of the full margin");
  require_margin(I, d);
  if (I == full.margin) throw Error(ErrorCode::BadIndexSets, "margin must be a proper subset");

  // Keep I together with the border row/column (index d of the joined matrix).
  const SymMatrix reduced = schur_complement(full.joined(), I.with(d));
  const int n = I.size();
  return {I, SymMatrix(reduced.dense().topLeftCorner(n, n)), reduced.dense().topRightCorner(n, 1), reduced(n, n)};
}

Variogram variogram_from_precision(const SymMatrix& theta, const Tolerance& tol) {
  const int d = theta.dim();
  if (d < 2) throw Error(ErrorCode::UnsupportedSize, "precision matrix needs dimension >= 2");
  const double scale = std::max(1.0, theta.max_abs());

  const Vector rowsums = theta.dense().rowwise().sum();
  if (!tol.is_zero(rowsums.cwiseAbs().maxCoeff(), scale))
    throw Error(ErrorCode::BadKernel, "row sums are not zero (max |row sum| = " +
                                          std::to_string(rowsums.cwiseAbs().maxCoeff()) + ")");
  const auto eig = eigen_sym(theta);
  if (eig.values(0) < -tol.rel * scale)
    throw Error(ErrorCode::BadKernel, "not positive semidefinite (eigenvalue " + std::to_string(eig.values(0)) + ")");
  if (!(eig.values(1) > tol.rel * scale))
    throw Error(ErrorCode::BadKernel, "kernel is larger than span(1) (second eigenvalue " +
                                          std::to_string(eig.values(1)) + ")");

  Matrix pinv = Matrix::Zero(d, d);
  for (int k = 1; k < d; ++k) pinv += eig.vectors.col(k) * eig.vectors.col(k).transpose() / eig.values(k);

  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
  g.diagonal().setZero();

  auto res = validate_variogram(g, tol);
  if (!res.ok()) throw Error(ErrorCode::RoundTripFailure, "recovered matrix is not a variogram: " + res.message);

  const auto back = fiedler_bapat(*res.variogram);
  const double residual = (back.theta.dense() - theta.dense()).cwiseAbs().maxCoeff();
  if (residual > 1e-8 * scale)
    throw Error(ErrorCode::RoundTripFailure, "precision round trip residual " + std::to_string(residual));
  return std::move(*res.variogram);
}

ExponentMeasureDensity::ExponentMeasureDensity(const Variogram& gamma) : dim_(gamma.dim()) {
  const Matrix cm = cayley_menger(gamma, IndexSet::full(dim_)).assemble();
  Eigen::FullPivLU<Matrix> lu(cm);
  const double det_cm = lu.determinant();
  if (!(det_cm < 0.0)) throw Error(ErrorCode::SingularCM, "det CM must be negative for a variogram");
  cm_inverse_ = lu.inverse();
  cm_inverse_ = 0.5 * (cm_inverse_ + cm_inverse_.transpose()).eval();
  log_norm_ = 0.5 * ((1 - dim_) * kLog2Pi - std::log(-det_cm));
}

double ExponentMeasureDensity::log_density(const Vector& y) const {
  if (y.size() != dim_) throw Error(ErrorCode::BadIndexSets, "point has wrong dimension");
  return log_norm_ - 0.5 * (y.dot(cm_inverse_.topLeftCorner(dim_, dim_) * y) +
                            2.0 * y.dot(cm_inverse_.topRightCorner(dim_, 1).col(0)) + cm_inverse_(dim_, dim_));
}

double ExponentMeasureDensity::operator()(const Vector& y) const { return std::exp(log_density(y)); }

double ExponentMeasureDensity::operator()(const double* y) const { return std::exp(log_norm_) * kernel(y); }

double ExponentMeasureDensity::kernel(const double* y) const {
  double quad = cm_inverse_(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    double row = cm_inverse_(i, dim_);
    quad += 2.0 * row * y[i];
    double acc = 0.0;
    for (int j = 0; j < dim_; ++j) acc += cm_inverse_(i, j) * y[j];
    quad += y[i] * acc;
  }
  return std::exp(-0.5 * quad);
}

double exponent_density(const Variogram& gamma, const Vector& y) { return ExponentMeasureDensity(gamma)(y); }

double exponent_density_precision(const FiedlerBapatBlock& block, const Vector& y, int k) {
  const int d = block.theta.dim();
  if (d < 2) throw Error(ErrorCode::UnsupportedSize, "density needs dimension >= 2");
  if (k < 0 || k >= d) throw Error(ErrorCode::BadIndexSets, "reference index out of range");
  if (y.size() != d) throw Error(ErrorCode::BadIndexSets, "point has wrong dimension");
  const IndexSet rest = IndexSet::full(d).without(k);
  const double det_minor = det(submatrix(block.theta.dense(), rest, rest));
  const double quad = y.dot(block.theta.dense() * y) + 2.0 * y.dot(block.p) + block.sigma2;
  return std::exp(0.5 * ((1 - d) * kLog2Pi + std::log(det_minor)) - 0.5 * quad);
}

Vector ConditionalGaussian::mean(const Vector& y_given) const {
  if (y_given.size() != given.size()) throw Error(ErrorCode::BadIndexSets, "conditioning vector has wrong size");
  Vector ext(y_given.size() + 1);
  ext << y_given, 1.0;
  return mean_coeff * ext;
}

ConditionalGaussian conditional_gaussian(const Variogram& gamma, IndexSet A, IndexSet C) {
  const int d = gamma.dim();
  if (A.empty() || C.empty() || !A.disjoint(C) || !(A | C).is_subset_of(IndexSet::full(d)))
    throw Error(ErrorCode::BadIndexSets, "need nonempty disjoint A, C within [d]");
  const Matrix& g = gamma.matrix().dense();
  const int c = C.size();

  Matrix cross(A.size(), c + 1);  // [-Gamma_{A,C}/2, 1]
  cross.leftCols(c) = -0.5 * submatrix(g, A, C);
  cross.col(c).setOnes();

  Eigen::FullPivLU<Matrix> lu(cayley_menger(gamma, C).assemble());
  const Matrix coeff = lu.solve(cross.transpose()).transpose();  // cross * CM^{-1}
  const SymMatrix cov(-0.5 * submatrix(g, A, A) - coeff * cross.transpose());

  Eigen::LLT<Matrix> llt(cov.dense());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotCND, "conditional covariance is not positive definite");
  return {A, C, cov, coeff};
}

Emtp2Check is_emtp2(const SymMatrix& theta, const Tolerance& tol) {
  Emtp2Check out;
  out.scale = floor_scale({theta.max_abs()});
  out.max_offdiag = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < theta.dim(); ++i)
    for (int j = i + 1; j < theta.dim(); ++j) out.max_offdiag = std::max(out.max_offdiag, theta(i, j));
  if (theta.dim() < 2) out.max_offdiag = 0.0;
  out.holds = out.max_offdiag <= tol.rel * out.scale;
  out.boundary = out.holds && tol.is_zero(out.max_offdiag, out.scale);
  return out;
}

PSignCheck p_sign(const Vector& p, const Tolerance& tol) {
  PSignCheck out;
  out.min_entry = p.size() == 0 ? 0.0 : p.minCoeff();
  out.positive = out.min_entry > tol.rel;
  out.nonnegative = out.min_entry >= -tol.rel;
  return out;
}

}  // namespace hrmod
