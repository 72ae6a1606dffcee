#include "hrmod/elliptope.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace hrmod {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// sigma2(Gamma(R)) = 1 and p = w / w^T 1 are certified to this accuracy.
constexpr double kMapCertification = 1e-8;
constexpr double kSampleBox = 4.0;

// 53 random mantissa bits in [0, 1); fixed across standard libraries.
double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double eigen_scale(const Vector& values) { return floor_scale({values.cwiseAbs().maxCoeff()}); }

}  // namespace

CorrelationMatrix CorrelationMatrix::from_matrix(const Matrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorCode::NotSquare, "correlation matrix must be square");
  const double scale = floor_scale({m.cwiseAbs().maxCoeff()});
  if (!tol.is_zero((m - m.transpose()).cwiseAbs().maxCoeff(), scale))
    throw Error(ErrorCode::NotSymmetric, "correlation matrix is not symmetric");
  for (int i = 0; i < m.rows(); ++i)
    if (!tol.is_zero(m(i, i) - 1.0, scale))
      throw Error(ErrorCode::NonzeroDiagonal, "correlation matrix needs unit diagonal");
  SymMatrix r(m);
  Matrix dense = r.dense();
  dense.diagonal().setOnes();
  return CorrelationMatrix(SymMatrix(dense));
}

std::string_view to_string(ElliptopeTag tag) {
  switch (tag) {
    case ElliptopeTag::InteriorE: return "interior";
    case ElliptopeTag::BoundaryStar: return "boundary-star";
    case ElliptopeTag::BoundaryExcluded: return "boundary-excluded";
    case ElliptopeTag::Outside: return "outside";
  }
  return "outside";
}

std::string_view to_string(BoundaryFlag f) {
  switch (f) {
    case BoundaryFlag::Interior: return "interior";
    case BoundaryFlag::Boundary: return "boundary";
    case BoundaryFlag::Excluded: return "excluded";
  }
  return "interior";
}

ElliptopeMembership in_hr_elliptope(const Matrix& m, const Tolerance& tol) {
  ElliptopeMembership out;
  const auto v = validate_variogram(m, tol);
  if (!v.ok()) {
    out.sigma2 = kNaN;
    out.reason = v.error;
    return out;
  }
  out.sigma2 = fiedler_bapat(*v.variogram).sigma2;
  out.member = out.sigma2 <= 1.0 + tol.rel;
  out.boundary = std::abs(out.sigma2 - 1.0) <= kElliptopeBoundaryBand;
  return out;
}

ElliptopeClassification classify_correlation(const CorrelationMatrix& r, const Tolerance& tol) {
  const int d = r.dim();
  const auto eig = eigen_sym(r.matrix());
  const double scale = eigen_scale(eig.values);
  ElliptopeClassification out;
  out.min_eigenvalue = eig.values(0);
  for (int i = 0; i < d; ++i)
    if (eig.values(i) > tol.rel * scale) ++out.rank;
  if (out.min_eigenvalue < -tol.rel * scale) {
    out.tag = ElliptopeTag::Outside;
    return out;
  }
  if (out.rank == d) {
    out.tag = ElliptopeTag::InteriorE;
    return out;
  }
  if (out.rank == d - 1) {
    out.kernel = eig.vectors.col(0);
    out.kernel_dot_ones = out.kernel->sum();
    out.tag = std::abs(*out.kernel_dot_ones) > tol.rel ? ElliptopeTag::BoundaryStar : ElliptopeTag::BoundaryExcluded;
    return out;
  }
  out.tag = ElliptopeTag::BoundaryExcluded;
  return out;
}

CorrelationMatrix map_R_of_Gamma(const Variogram& gamma, const Tolerance& tol) {
  const auto block = fiedler_bapat(gamma);
  const int d = gamma.dim();
  const Matrix r = -gamma.matrix().dense() / (2.0 * block.sigma2) + Matrix::Ones(d, d);
  auto corr = CorrelationMatrix::from_matrix(r, tol);
  const auto cls = classify_correlation(corr, tol);
  if (cls.tag != ElliptopeTag::BoundaryStar)
    throw Error(ErrorCode::BadRank, "R(Gamma) is not a rank d-1 correlation matrix with kernel off 1-perp");
  // The kernel must be span(p): compare the unit vectors up to sign.
  const Vector pn = block.p.normalized();
  if (std::abs(std::abs(cls.kernel->dot(pn)) - 1.0) > kMapCertification)
    throw Error(ErrorCode::RoundTripFailure, "kernel of R(Gamma) differs from span(p)");
  return corr;
}

Variogram map_Gamma_of_R(const CorrelationMatrix& r, const Tolerance& tol) {
  const auto cls = classify_correlation(r, tol);
  if (cls.tag == ElliptopeTag::BoundaryExcluded && cls.rank == r.dim() - 1)
    throw Error(ErrorCode::KernelOrthogonalToOnes, "kernel of R is orthogonal to 1");
  if (cls.tag != ElliptopeTag::BoundaryStar)
    throw Error(ErrorCode::BadRank, "R must have rank d-1, found rank " + std::to_string(cls.rank) + " (" +
                                        std::string(to_string(cls.tag)) + ")");
  const int d = r.dim();
  const Matrix g = 2.0 * (Matrix::Ones(d, d) - r.matrix().dense());
  const auto gamma = Variogram::from_matrix(g, tol);
  const auto block = fiedler_bapat(gamma);
  if (std::abs(block.sigma2 - 1.0) > kMapCertification)
    throw Error(ErrorCode::RoundTripFailure, "sigma2 of Gamma(R) is " + std::to_string(block.sigma2));
  const Vector p_expected = *cls.kernel / *cls.kernel_dot_ones;
  // Dividing by w^T 1 amplifies rounding in w by 1 / |w^T 1|.
  const double p_tol = kMapCertification * floor_scale({p_expected.cwiseAbs().maxCoeff()}) /
                       std::min(1.0, std::abs(*cls.kernel_dot_ones));
  if ((block.p - p_expected).cwiseAbs().maxCoeff() > p_tol)
    throw Error(ErrorCode::RoundTripFailure, "p of Gamma(R) differs from the normalized kernel of R");
  return gamma;
}

CorrelationMatrix preimage_correlation(const Variogram& gamma) {
  const int d = gamma.dim();
  return CorrelationMatrix::from_matrix(Matrix::Ones(d, d) - 0.5 * gamma.matrix().dense());
}

CorrelationMatrix random_boundary_correlation(int d, Rng& rng) {
  if (d < 2) throw Error(ErrorCode::UnsupportedSize, "need d >= 2");
  std::normal_distribution<double> normal;
  Matrix v(d - 1, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d - 1; ++i) v(i, j) = normal(rng);
    v.col(j).normalize();
  }
  return CorrelationMatrix::from_matrix(v.transpose() * v);
}

ElliptopePoint evaluate_point(double g12, double g13, double g23, const Tolerance& tol) {
  ElliptopePoint pt;
  pt.coords = {g12, g13, g23};
  pt.ci_residuals = {g12 - g13 - g23, g13 - g12 - g23, g23 - g12 - g13};
  Matrix m(3, 3);
  m << 0, g12, g13, g12, 0, g23, g13, g23, 0;
  const auto v = validate_variogram(m, tol);
  if (!v.ok()) {
    pt.sigma2 = kNaN;
    pt.flag = BoundaryFlag::Excluded;
    return pt;
  }
  const auto block = fiedler_bapat(*v.variogram);
  pt.sigma2 = block.sigma2;
  pt.in_f3 = pt.sigma2 <= 1.0 + tol.rel;
  pt.emtp2 = is_emtp2(block.theta, tol).holds;
  pt.p_nonneg = p_sign(block.p, tol).nonnegative;
  pt.flag = std::abs(pt.sigma2 - 1.0) <= kElliptopeBoundaryBand ? BoundaryFlag::Boundary : BoundaryFlag::Interior;
  return pt;
}

F3Sample sample_f3(int n, std::uint64_t seed, const SampleFilters& filters, bool normalize, const Tolerance& tol) {
  if (n <= 0) throw Error(ErrorCode::UnsupportedSize, "sample size must be positive");
  F3Sample out;
  Rng rng(seed);
  for (int draw = 0; draw < n; ++draw) {
    std::array<double, 3> g;
    for (auto& x : g) x = kSampleBox * unit_uniform(rng);
    ++out.draws;
    auto pt = evaluate_point(g[0], g[1], g[2], tol);
    if (!pt.in_f3) continue;
    ++out.accepted;
    if (normalize) {
      const double s = pt.sigma2;
      pt = evaluate_point(g[0] / s, g[1] / s, g[2] / s, tol);
    }
    if (filters.emtp2 && !pt.emtp2) continue;
    if (filters.boundary_only && pt.flag != BoundaryFlag::Boundary) continue;
    ++out.passed_filters;
    out.points.push_back(pt);
  }
  return out;
}

std::vector<ElliptopePoint> sample_excluded_locus(int n, std::uint64_t seed, const Tolerance& tol) {
  if (n <= 0) throw Error(ErrorCode::UnsupportedSize, "sample size must be positive");
  static constexpr int kPairs[3][3] = {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}};
  Rng rng(seed);
  std::vector<ElliptopePoint> out;
  out.reserve(n);
  for (int draw = 0; draw < n; ++draw) {
    const auto& pair = kPairs[rng() % 3];
    const double c = 2.0 * unit_uniform(rng) - 1.0;
    Matrix r = Matrix::Identity(3, 3);
    r(pair[0], pair[1]) = r(pair[1], pair[0]) = 1.0;
    r(pair[0], pair[2]) = r(pair[2], pair[0]) = c;
    r(pair[1], pair[2]) = r(pair[2], pair[1]) = c;
    const auto corr = CorrelationMatrix::from_matrix(r, tol);
    if (classify_correlation(corr, tol).tag != ElliptopeTag::BoundaryExcluded) continue;
    const Matrix g = 2.0 * (Matrix::Ones(3, 3) - r);
    auto pt = evaluate_point(g(0, 1), g(0, 2), g(1, 2), tol);
    pt.flag = BoundaryFlag::Excluded;
    out.push_back(pt);
  }
  return out;
}

void write_csv_header(std::ostream& os) { os << kElliptopeCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const ElliptopePoint& pt) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(12);
  auto num = [&](double x) {
    if (std::isnan(x)) os << "nan";
    else os << x;
  };
  num(pt.coords[0]);
  os << ',';
  num(pt.coords[1]);
  os << ',';
  num(pt.coords[2]);
  os << ',' << (pt.in_f3 ? 1 : 0) << ',';
  num(pt.sigma2);
  os << ',' << (pt.emtp2 ? 1 : 0) << ',' << (pt.p_nonneg ? 1 : 0);
  for (double r : pt.ci_residuals) {
    os << ',';
    num(r);
  }
  os << ',' << to_string(pt.flag) << '\n';
  os.flags(flags);
  os.precision(prec);
}

}  // namespace hrmod
