#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "hrmod/quadrature.hpp"
#include "hrmod/set_functions.hpp"
#include "oracles.hpp"

using namespace hrmod;
using fixtures::rel_err;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("variogram validation") {
  for (double g : {1e-3, 0.5, 40.0}) {
    Matrix m(2, 2);
    m << 0, g, g, 0;
    CHECK(validate_variogram(m).ok());
  }
  CHECK(validate_variogram(fixtures::equilateral().matrix().dense()).ok());

  // Squared sides 1, 1, 5 violate the triangle inequality for distances.
  Matrix bad(3, 3);
  bad << 0, 1, 1, 1, 0, 5, 1, 5, 0;
  const auto r = validate_variogram(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(*r.error == ErrorCode::NotCND);
  // Oracle: scan unit x orthogonal to 1 and record the largest x^T Gamma x.
  const Matrix P = ones_complement_basis(3);
  double worst = -1e300;
  for (int k = 0; k < 3600; ++k) {
    const double t = k * std::numbers::pi / 1800.0;
    const Vector x = P * Vector{{std::cos(t), std::sin(t)}};
    worst = std::max(worst, x.dot(bad * x));
  }
  CHECK(worst > 0.0);
  CHECK(r.offending_value == doctest::Approx(worst).epsilon(1e-5));

  Matrix asym = fixtures::equilateral().matrix().dense();
  asym(0, 1) += 0.1;
  CHECK(*validate_variogram(asym).error == ErrorCode::NotSymmetric);
  Matrix diag = fixtures::equilateral().matrix().dense();
  diag(1, 1) = 0.1;
  CHECK(*validate_variogram(diag).error == ErrorCode::NonzeroDiagonal);
  CHECK(*validate_variogram(Matrix::Zero(2, 3)).error == ErrorCode::NotSquare);
  CHECK_THROWS_AS(Variogram::from_matrix(bad), Error);
}

TEST_CASE("Cayley–Menger matrices") {
  Matrix one = Matrix::Zero(1, 1);
  CHECK(cayley_menger(SymMatrix(one)).assemble() == (Matrix(2, 2) << 0, 1, 1, 0).finished());

  const double g = 2.5;
  Matrix m(2, 2);
  m << 0, g, g, 0;
  Matrix expected(3, 3);
  expected << 0, -g / 2, 1, -g / 2, 0, 1, 1, 1, 0;
  CHECK(cayley_menger(Variogram::from_matrix(m), IndexSet{0, 1}).assemble() == expected);
  CHECK(det(cayley_menger(fixtures::equilateral(), IndexSet::full(3))) == doctest::Approx(-0.75));
}

TEST_CASE("Fiedler–Bapat blocks on hand-derived instances") {
  const double g = 3.0;
  Matrix m(2, 2);
  m << 0, g, g, 0;
  auto b = fiedler_bapat(Variogram::from_matrix(m));
  CHECK(max_abs_diff(b.theta.dense(), (Matrix(2, 2) << 1, -1, -1, 1).finished() / g) < 1e-14);
  CHECK(b.p(0) == doctest::Approx(0.5));
  CHECK(b.p(1) == doctest::Approx(0.5));
  CHECK(b.sigma2 == doctest::Approx(g / 4));

  b = fiedler_bapat(fixtures::four_cycle());
  CHECK(max_abs_diff(b.theta.dense(), fixtures::four_cycle_laplacian()) < 1e-13);
  CHECK(max_abs_diff(b.p, Vector::Constant(4, 0.25)) < 1e-14);
  CHECK(b.sigma2 == doctest::Approx(5.0 / 16).epsilon(1e-14));

  b = fiedler_bapat(fixtures::equilateral());
  CHECK(b.sigma2 == doctest::Approx(oracle::circumradius_sq(1, 1, 1)).epsilon(1e-14));
  CHECK(max_abs_diff(b.p, Vector::Constant(3, 1.0 / 3)) < 1e-14);

  b = fiedler_bapat(fixtures::four_cycle(), IndexSet{2});
  CHECK(b.theta(0, 0) == 0.0);
  CHECK(b.p(0) == 1.0);
  CHECK(b.sigma2 == 0.0);
  CHECK_THROWS_AS(fiedler_bapat(fixtures::four_cycle(), IndexSet{}), Error);
}

TEST_CASE("marginal blocks by Kron reduction") {
  const auto c4 = fixtures::four_cycle();
  const auto full = fiedler_bapat(c4);
  auto m = marginal_block_via_schur(full, IndexSet{0, 1, 3});
  CHECK(m.sigma2 == doctest::Approx(oracle::circumradius_sq(0.75, 0.75, 1.0)).epsilon(1e-13));
  CHECK(m.sigma2 == doctest::Approx(9.0 / 32).epsilon(1e-13));
  CHECK(max_abs_diff(m.theta.dense(), fiedler_bapat(c4, IndexSet{0, 1, 3}).theta.dense()) < 1e-12);
  CHECK(marginal_block_via_schur(full, IndexSet{1, 3}).sigma2 == doctest::Approx(0.25).epsilon(1e-13));

  Rng rng(17);
  for (int d = 3; d <= 7; ++d) {
    const auto gamma = random_point_variogram(d, rng);
    const auto fb = fiedler_bapat(gamma);
    for (auto I : nonempty_subsets_lex(d)) {
      if (I.size() < 2 || I.size() == d) continue;
      const auto direct = fiedler_bapat(gamma, I);
      const auto kron = marginal_block_via_schur(fb, I);
      const double scale = std::max(1.0, direct.theta.max_abs());
      CHECK(max_abs_diff(direct.theta.dense(), kron.theta.dense()) <= 1e-9 * scale);
      CHECK(max_abs_diff(direct.p, kron.p) <= 1e-9 * std::max(1.0, direct.p.cwiseAbs().maxCoeff()));
      CHECK(rel_err(kron.sigma2, direct.sigma2) <= 1e-9);
    }
  }
}

TEST_CASE("block invariants and explicit formulas") {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 7;
    const auto gamma = random_point_variogram(d, rng);
    for (auto I : nonempty_subsets_lex(d)) {
      if (I.size() < 2 || (trial % 3 && I.size() < d)) continue;
      const auto b = fiedler_bapat(gamma, I);
      CHECK((b.theta.dense() * Vector::Ones(I.size())).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, b.theta.max_abs()));
      CHECK(std::abs(b.p.sum() - 1.0) <= 1e-10);
      const auto ex = explicit_p_sigma2(gamma, I);
      CHECK(rel_err(ex.sigma2, b.sigma2) < 1e-9);
      CHECK(max_abs_diff(ex.p, b.p) < 1e-9 * std::max(1.0, b.p.cwiseAbs().maxCoeff()));
    }
    // Kernel of the full precision matrix is exactly span(1).
    const auto eig = eigen_sym(fiedler_bapat(gamma).theta);
    CHECK(eig.values(1) > 1e-9 * std::max(1.0, eig.values.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("sigma2 is monotone under inclusion") {
  Rng rng(29);
  for (int d = 2; d <= 6; ++d) {
    for (int rep = 0; rep < 3; ++rep) {
      const auto gamma = random_point_variogram(d, rng);
      const SubsetTable table(gamma);
      for (auto I : nonempty_subsets_lex(d))
        for (int k = 0; k < d; ++k)
          if (!I.contains(k)) CHECK(table.sigma2(I) <= table.sigma2(I.with(k)) + 1e-12);
    }
  }
}

TEST_CASE("variogram from precision") {
  const double g = 0.7;
  Matrix t(2, 2);
  t << 1, -1, -1, 1;
  CHECK(variogram_from_precision(SymMatrix(t / g))(0, 1) == doctest::Approx(g).epsilon(1e-13));

  const auto c4 = variogram_from_precision(SymMatrix(fixtures::four_cycle_laplacian()));
  CHECK(c4(0, 1) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(c4(0, 2) == doctest::Approx(1.0).epsilon(1e-13));

  Matrix path(3, 3);
  path << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  const auto p3 = variogram_from_precision(SymMatrix(path));
  CHECK(p3(0, 1) == doctest::Approx(1.0));
  CHECK(p3(1, 2) == doctest::Approx(1.0));
  CHECK(p3(0, 2) == doctest::Approx(2.0));

  // Disconnected graph: kernel of dimension two.
  Matrix split = Matrix::Zero(4, 4);
  split.topLeftCorner(2, 2) = t;
  split.bottomRightCorner(2, 2) = t;
  CHECK_THROWS_WITH_AS(variogram_from_precision(SymMatrix(split)), doctest::Contains("BadKernel"), Error);
  // Positive definite: no kernel at all.
  CHECK_THROWS_AS(variogram_from_precision(SymMatrix::identity(3)), Error);

  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 7;
    const auto gamma = random_point_variogram(d, rng);
    const auto back = variogram_from_precision(fiedler_bapat(gamma).theta);
    CHECK(max_abs_diff(back.matrix().dense(), gamma.matrix().dense()) <= 1e-8 * gamma.matrix().max_abs());
  }
  // Effective resistances of weighted Laplacians, grounded-inverse oracle.
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 6;
    const auto g = with_random_weights(random_connected_graph(d, rng), rng);
    const auto gamma = laplacian_variogram(g);
    const Matrix lap = g.laplacian().dense();
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) CHECK(rel_err(gamma(i, j), oracle::grounded_resistance(lap, i, j)) < 1e-10);
  }
}

TEST_CASE("exponent measure density: both forms agree") {
  Rng rng(37);
  std::normal_distribution<double> z(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 5;
    const auto gamma = random_point_variogram(d, rng);
    const auto block = fiedler_bapat(gamma);
    const auto back = variogram_from_precision(block.theta);
    const ExponentMeasureDensity dens(gamma), dens_back(back);
    for (int s = 0; s < 10; ++s) {
      Vector y(d);
      for (int i = 0; i < d; ++i) y(i) = z(rng);
      const double v = dens(y);
      CHECK(rel_err(v, exponent_density(gamma, y)) < 1e-12);
      CHECK(std::abs(dens_back(y) - v) <= 1e-8 * std::max(v, 1e-300));
      for (int k = 0; k < d; ++k) CHECK(std::abs(exponent_density_precision(block, y, k) - v) <= 1e-10 * v);
    }
  }
  // d = 2, y = 0: closed form from the 3x3 inverse.
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const double expected = std::exp(-0.5 * 0.25) / std::sqrt(2 * std::numbers::pi);
  CHECK(exponent_density(Variogram::from_matrix(m), Vector::Zero(2)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("exponent measure density integrates to one on a canonical halfspace") {
  for (double g : {0.5, 1.0, 2.0}) {
    Matrix m(2, 2);
    m << 0, g, g, 0;
    const auto gamma = Variogram::from_matrix(m);
    for (int k = 0; k < 2; ++k) CHECK(std::abs(halfspace_mass(gamma, k) - 1.0) <= 1e-3);
  }
  Rng rng(1);
  CHECK_THROWS_AS(halfspace_mass(random_point_variogram(4, rng), 0), Error);
}

TEST_CASE("conditional Gaussian parameters") {
  const double g = 1.7;
  Matrix m(2, 2);
  m << 0, g, g, 0;
  const auto cg2 = conditional_gaussian(Variogram::from_matrix(m), IndexSet{0}, IndexSet{1});
  CHECK(cg2.covariance(0, 0) == doctest::Approx(g));
  CHECK(cg2.mean_coeff(0, 0) == doctest::Approx(1.0));
  CHECK(cg2.mean_coeff(0, 1) == doctest::Approx(-g / 2));

  const auto c4 = conditional_gaussian(fixtures::four_cycle(), IndexSet{0, 2}, IndexSet{1, 3});
  CHECK(std::abs(c4.covariance(0, 1)) <= 1e-9);

  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial % 4;
    const auto gamma = random_point_variogram(d, rng);
    const IndexSet C = IndexSet::from_mask(1 + (trial % ((1u << (d - 1)) - 1)));
    const IndexSet A = IndexSet::full(d) - C;
    const auto cg = conditional_gaussian(gamma, A, C);
    const double ratio = det(cayley_menger(gamma, IndexSet::full(d))) / det(cayley_menger(gamma, C));
    CHECK(rel_err(det(cg.covariance), ratio) < 1e-9);
  }
  CHECK_THROWS_AS(conditional_gaussian(fixtures::four_cycle(), IndexSet{0}, IndexSet{0, 1}), Error);
  CHECK_THROWS_AS(conditional_gaussian(fixtures::four_cycle(), IndexSet{0}, IndexSet{}), Error);
}
