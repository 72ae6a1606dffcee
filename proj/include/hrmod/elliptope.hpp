#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "hrmod/generators.hpp"
#include "hrmod/hr_model.hpp"

namespace hrmod {

/// Symmetric matrix with unit diagonal. Positive semidefiniteness is not
/// enforced; classify_correlation reports it.
class CorrelationMatrix {
 public:
  /// Throws NotSymmetric / NonzeroDiagonal (for a diagonal away from 1).
  static CorrelationMatrix from_matrix(const Matrix& m, const Tolerance& tol = {});

  int dim() const { return r_.dim(); }
  const SymMatrix& matrix() const { return r_; }

 private:
  explicit CorrelationMatrix(SymMatrix r) : r_(std::move(r)) {}
  SymMatrix r_;
};

enum class ElliptopeTag { InteriorE, BoundaryStar, BoundaryExcluded, Outside };
std::string_view to_string(ElliptopeTag tag);

struct ElliptopeClassification {
  ElliptopeTag tag = ElliptopeTag::Outside;
  int rank = 0;
  double min_eigenvalue = 0.0;
  // Unit kernel vector and its inner product with 1, for rank d-1.
  std::optional<Vector> kernel;
  std::optional<double> kernel_dot_ones;
};

/// Absolute band around sigma2 = 1 in which a variogram counts as boundary.
inline constexpr double kElliptopeBoundaryBand = 1e-9;

struct ElliptopeMembership {
  bool member = false;
  bool boundary = false;
  double sigma2 = 0.0;  // NaN when the input is not a variogram
  std::optional<ErrorCode> reason;
};

/// Valid variogram with sigma2 <= 1 + tol.
ElliptopeMembership in_hr_elliptope(const Matrix& m, const Tolerance& tol = {});

/// -Gamma / (2 sigma2) + 11^T. The result is checked to be a rank d-1
/// correlation matrix with kernel span(p).
CorrelationMatrix map_R_of_Gamma(const Variogram& gamma, const Tolerance& tol = {});

/// 2(11^T - R) for R of rank d-1 with kernel w, w^T 1 != 0. The result is
/// checked to have sigma2 = 1 and p = w / w^T 1. Throws BadRank or
/// KernelOrthogonalToOnes.
Variogram map_Gamma_of_R(const CorrelationMatrix& r, const Tolerance& tol = {});

/// Outside / InteriorE from the smallest eigenvalue; boundary matrices split
/// into BoundaryStar (rank d-1, kernel not orthogonal to 1) and
/// BoundaryExcluded.
ElliptopeClassification classify_correlation(const CorrelationMatrix& r, const Tolerance& tol = {});

/// 11^T - Gamma / 2: a correlation matrix exactly when sigma2(Gamma) <= 1.
CorrelationMatrix preimage_correlation(const Variogram& gamma);

/// Gram matrix of d random unit vectors in R^{d-1}: rank d-1 and, almost
/// surely, kernel not orthogonal to 1.
CorrelationMatrix random_boundary_correlation(int d, Rng& rng);

enum class BoundaryFlag { Interior, Boundary, Excluded };
std::string_view to_string(BoundaryFlag f);

/// A point (Gamma12, Gamma13, Gamma23) of variogram space for d = 3.
struct ElliptopePoint {
  std::array<double, 3> coords{};
  bool in_f3 = false;
  double sigma2 = 0.0;  // NaN when the coordinates are not a variogram
  bool emtp2 = false;
  bool p_nonneg = false;
  // Gamma12 - Gamma13 - Gamma23, Gamma13 - Gamma12 - Gamma23, Gamma23 - Gamma12 - Gamma13.
  std::array<double, 3> ci_residuals{};
  BoundaryFlag flag = BoundaryFlag::Interior;
};

ElliptopePoint evaluate_point(double g12, double g13, double g23, const Tolerance& tol = {});

struct SampleFilters {
  bool emtp2 = false;
  bool boundary_only = false;
};

struct F3Sample {
  std::vector<ElliptopePoint> points;
  int draws = 0;
  int accepted = 0;        // in F3
  int passed_filters = 0;  // emitted
};

/// Draws n triples uniformly from [0,4]^3 and keeps those in F3 that pass the
/// filters. The box suffices: Gamma_ij = 4 sigma2({i,j}) <= 4 sigma2([3]) <= 4.
/// With `normalize`, accepted points are rescaled to sigma2 = 1. Deterministic
/// in (n, seed).
F3Sample sample_f3(int n, std::uint64_t seed, const SampleFilters& filters = {}, bool normalize = false,
                   const Tolerance& tol = {});

/// Images 2(11^T - R) of n rank-2 correlation matrices whose kernel is
/// orthogonal to 1 (R_ij = 1, R_ik = R_jk = c). These points are flagged
/// Excluded and are not variograms.
std::vector<ElliptopePoint> sample_excluded_locus(int n, std::uint64_t seed, const Tolerance& tol = {});

inline constexpr std::string_view kElliptopeCsvHeader =
    "g12,g13,g23,in_f3,sigma2,emtp2,p_nonneg,ci12_3,ci13_2,ci23_1,boundary_flag";

void write_csv_header(std::ostream& os);
/// One row, 12 significant digits, booleans as 1/0.
void write_csv_row(std::ostream& os, const ElliptopePoint& pt);

}  // namespace hrmod
