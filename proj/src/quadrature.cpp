#include "hrmod/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace hrmod {

namespace {

constexpr int kRulePoints = 8;
constexpr int kMaxQuadratureDim = 3;
// e^{-50} is far below any tolerance used with these integrals.
constexpr double kExponentialCutoff = 50.0;
constexpr double kGaussianHalfWidth = 10.0;  // in standard deviations

struct Node {
  double x;
  double w;
};

const std::vector<Node>& reference_rule() {
  static const std::vector<Node> rule = [] {
    using Gauss = boost::math::quadrature::gauss<double, kRulePoints>;
    std::vector<Node> nodes;
    const auto& a = Gauss::abscissa();
    const auto& w = Gauss::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        nodes.push_back({0.0, w[i]});
      } else {
        nodes.push_back({-a[i], w[i]});
        nodes.push_back({a[i], w[i]});
      }
    }
    return nodes;
  }();
  return rule;
}

std::vector<Node> axis_nodes(const QuadratureAxis& axis) {
  std::vector<Node> out;
  const double h = (axis.hi - axis.lo) / axis.panels;
  for (int p = 0; p < axis.panels; ++p) {
    const double mid = axis.lo + (p + 0.5) * h;
    for (const auto& n : reference_rule()) out.push_back({mid + 0.5 * h * n.x, 0.5 * h * n.w});
  }
  return out;
}

void require_small(const Variogram& gamma) {
  if (gamma.dim() > kMaxQuadratureDim)
    throw Error(ErrorCode::UnsupportedSize, "quadrature limited to dimension <= 3");
}

// Integrates g(t, z) where the first axis is t in [0, cutoff] and z collects
// z_i = y_i - y_k, i != k. Under the density z is Gaussian with mean
// -Gamma_ik / 2 and covariance Sigma_ij = (Gamma_ik + Gamma_jk - Gamma_ij) / 2,
// so z = mean + L u with L L^T = Sigma turns a thin ridge (nearly flat
// simplices) into a round bump in u.
double sheared_integral(const Variogram& gamma, int k,
                        const std::function<double(double t, std::span<const double> z)>& g) {
  const int d = gamma.dim();
  const int m = d - 1;
  Vector mean(m);
  Matrix sigma(m, m);
  for (int a = 0, i = 0; i < d; ++i) {
    if (i == k) continue;
    mean(a) = -0.5 * gamma(i, k);
    for (int b = 0, j = 0; j < d; ++j) {
      if (j == k) continue;
      sigma(a, b++) = 0.5 * (gamma(i, k) + gamma(j, k) - gamma(i, j));
    }
    ++a;
  }
  const Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotCND, "conditional covariance is not positive definite");
  const Matrix L = llt.matrixL();
  const double jacobian = L.diagonal().prod();

  std::vector<QuadratureAxis> axes;
  axes.push_back({0.0, kExponentialCutoff, 10});
  for (int a = 0; a < m; ++a) axes.push_back({-kGaussianHalfWidth, kGaussianHalfWidth, 10});
  Vector u(m);
  std::vector<double> z(m);
  return jacobian * integrate_box(
                        [&](std::span<const double> x) {
                          for (int a = 0; a < m; ++a) u(a) = x[a + 1];
                          const Vector zv = mean + L * u;
                          for (int a = 0; a < m; ++a) z[a] = zv(a);
                          return g(x[0], z);
                        },
                        axes);
}

}  // namespace

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     const std::vector<QuadratureAxis>& axes) {
  const std::size_t dim = axes.size();
  if (dim == 0) return 0.0;
  std::vector<std::vector<Node>> nodes;
  nodes.reserve(dim);
  for (const auto& a : axes) nodes.push_back(axis_nodes(a));

  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> point(dim);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t a = 0; a < dim; ++a) {
      point[a] = nodes[a][idx[a]].x;
      w *= nodes[a][idx[a]].w;
    }
    total += w * f(point);
    std::size_t a = dim;
    while (a > 0) {
      --a;
      if (++idx[a] < nodes[a].size()) break;
      idx[a] = 0;
      if (a == 0) return total;
    }
  }
}

double halfspace_mass(const Variogram& gamma, int k, int panels_per_unit) {
  require_small(gamma);
  const int d = gamma.dim();
  if (k < 0 || k >= d) throw Error(ErrorCode::BadIndexSets, "reference index out of range");
  const ExponentMeasureDensity density(gamma);
  std::vector<QuadratureAxis> axes(d);
  for (int i = 0; i < d; ++i)
    axes[i] = i == k ? QuadratureAxis{0.0, 40.0, 40 * panels_per_unit / 8} : QuadratureAxis{-40.0, 40.0, 80 * panels_per_unit / 8};
  return integrate_box([&](std::span<const double> y) { return density(y.data()); }, axes);
}

double halfspace_kernel_integral(const Variogram& gamma, int k) {
  require_small(gamma);
  const int d = gamma.dim();
  if (k < 0 || k >= d) throw Error(ErrorCode::BadIndexSets, "reference index out of range");
  const ExponentMeasureDensity density(gamma);
  std::vector<double> y(d);
  return sheared_integral(gamma, k, [&](double t, std::span<const double> z) {
    for (int i = 0, j = 0; i < d; ++i) y[i] = i == k ? t : t + z[j++];
    return density.kernel(y.data());
  });
}

double circumcenter_halfspace_mass(const Variogram& gamma) {
  require_small(gamma);
  const int d = gamma.dim();
  const Vector p = fiedler_bapat(gamma).p;
  const ExponentMeasureDensity density(gamma);
  constexpr int k = 0;
  std::vector<double> y(d);
  // y = s*1 + (0, z); since p^T 1 = 1, y^T p > 0 iff s > -z^T p_{\k}.
  return sheared_integral(gamma, k, [&](double t, std::span<const double> z) {
    double zp = 0.0;
    for (int i = 1; i < d; ++i) zp += z[i - 1] * p(i);
    const double s = t - zp;
    y[k] = s;
    for (int i = 1; i < d; ++i) y[i] = s + z[i - 1];
    return density(y.data());
  });
}

}  // namespace hrmod
