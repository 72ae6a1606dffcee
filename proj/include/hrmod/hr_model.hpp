#pragma once

#include <optional>
#include <string>

#include "hrmod/error.hpp"
#include "hrmod/index_set.hpp"
#include "hrmod/matrix.hpp"
#include "hrmod/tolerance.hpp"

namespace hrmod {

struct ValidationResult;

/// Hüsler–Reiss parameter: symmetric, zero diagonal, strictly conditionally
/// negative definite. Only obtainable through validation (or derivation from
/// an already certified variogram), so every instance is valid.
class Variogram {
 public:
  /// Throws Error with the validation failure code.
  static Variogram from_matrix(const Matrix& m, const Tolerance& tol = {});

  int dim() const { return gamma_.dim(); }
  double operator()(int i, int j) const { return gamma_(i, j); }
  const SymMatrix& matrix() const { return gamma_; }

  /// Principal submatrix on I; valid for |I| >= 2 because CND is inherited.
  Variogram restricted(IndexSet I) const;
  /// t * Gamma for t > 0.
  Variogram scaled(double t) const;

 private:
  explicit Variogram(SymMatrix gamma) : gamma_(std::move(gamma)) {}
  friend ValidationResult validate_variogram(const Matrix&, const Tolerance&);

  SymMatrix gamma_;
};

struct ValidationResult {
  std::optional<Variogram> variogram;
  std::optional<ErrorCode> error;
  std::string message;
  // For NotCND: the largest eigenvalue of P^T Gamma P on the complement of 1
  // (must be negative). For the other errors: the offending entry.
  double offending_value = 0.0;

  bool ok() const { return !error.has_value(); }
};

/// Accepts a square matrix iff it is symmetric, has zero diagonal and is
/// strictly conditionally negative definite, all at the relative tolerance.
ValidationResult validate_variogram(const Matrix& m, const Tolerance& tol = {});

/// [[-Gamma/2, 1], [1^T, 0]] for an arbitrary symmetric Gamma.
BorderedMatrix cayley_menger(const SymMatrix& gamma);
/// Cayley–Menger matrix of the margin Gamma_{I,I}; |I| >= 1.
BorderedMatrix cayley_menger(const Variogram& gamma, IndexSet I);

/// Blocks of CM(Gamma_{I,I})^{-1} = [[Theta(I), p(I)], [p(I)^T, sigma2(I)]].
struct FiedlerBapatBlock {
  IndexSet margin;
  SymMatrix theta;
  Vector p;
  double sigma2 = 0.0;

  /// The full (|I|+1) x (|I|+1) inverse Cayley–Menger matrix.
  SymMatrix joined() const;
};

/// Inverts CM(Gamma_{I,I}) and reads off the blocks. For |I| = 1 the
/// convention Theta = [0], p = [1], sigma2 = 0 is returned. The p / sigma2
/// read from the inverse are cross-checked against the explicit formulas
/// p = Gamma^{-1}1 / 1^T Gamma^{-1} 1 and sigma2 = 1 / (2 * 1^T Gamma^{-1} 1).
FiedlerBapatBlock fiedler_bapat(const Variogram& gamma, IndexSet I);
FiedlerBapatBlock fiedler_bapat(const Variogram& gamma);

/// p(I) and sigma2(I) from the explicit Gamma^{-1} formulas only.
struct ExplicitPSigma {
  Vector p;
  double sigma2 = 0.0;
};
ExplicitPSigma explicit_p_sigma2(const Variogram& gamma, IndexSet I);

/// Marginal block obtained from the full block by Schur elimination of the
/// complement of I (Kron reduction). `full` must cover every index.
FiedlerBapatBlock marginal_block_via_schur(const FiedlerBapatBlock& full, IndexSet I);

/// Inverse of the Fiedler–Bapat map: Gamma_ij = T_ii + T_jj - 2 T_ij with T the
/// pseudoinverse of Theta. Theta must be PSD with kernel exactly span(1)
/// (BadKernel otherwise); the result is certified by a round trip.
Variogram variogram_from_precision(const SymMatrix& theta, const Tolerance& tol = {});

/// Sign test of the off-diagonal precision entries (extremal MTP2).
struct Emtp2Check {
  bool holds = false;
  // The largest off-diagonal entry sits inside the zero band.
  bool boundary = false;
  double max_offdiag = 0.0;
  double scale = 1.0;
};

/// holds iff max_{i != j} Theta_ij <= tol * max(1, max |Theta|).
Emtp2Check is_emtp2(const SymMatrix& theta, const Tolerance& tol = {});

/// Sign pattern of p with absolute threshold tol.rel (p is dimensionless).
struct PSignCheck {
  bool positive = false;     // every p_i > tol
  bool nonnegative = false;  // every p_i >= -tol
  double min_entry = 0.0;
};
PSignCheck p_sign(const Vector& p, const Tolerance& tol = {});

/// Exponent measure density evaluated from the Cayley–Menger form:
///   sqrt(-(2 pi)^{1-d} / det CM) * exp(-1/2 (y,1) CM^{-1} (y,1)^T).
/// The inverse and determinant are factored once at construction.
class ExponentMeasureDensity {
 public:
  explicit ExponentMeasureDensity(const Variogram& gamma);

  int dim() const { return dim_; }
  double operator()(const Vector& y) const;
  double operator()(const double* y) const;
  double log_density(const Vector& y) const;
  /// exp(-1/2 (y,1) CM^{-1} (y,1)^T) without the normalizing constant.
  double kernel(const double* y) const;

 private:
  int dim_;
  Matrix cm_inverse_;
  double log_norm_;
};

/// Requires dim >= 2.
double exponent_density(const Variogram& gamma, const Vector& y);

/// The same density from the precision form,
///   sqrt((2 pi)^{1-d} det Theta_{\k,\k}) * exp(-1/2 (y,1) [[Theta,p],[p^T,sigma2]] (y,1)^T),
/// for any reference index k.
double exponent_density_precision(const FiedlerBapatBlock& block, const Vector& y, int k);

/// Gaussian law of y_A given y_C under the exponent measure density.
struct ConditionalGaussian {
  IndexSet target;
  IndexSet given;
  SymMatrix covariance;
  // |A| x (|C|+1): mean = mean_coeff * (y_C, 1).
  Matrix mean_coeff;

  Vector mean(const Vector& y_given) const;
};

ConditionalGaussian conditional_gaussian(const Variogram& gamma, IndexSet A, IndexSet C);

}  // namespace hrmod
