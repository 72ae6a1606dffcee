#pragma once

#include <Eigen/Dense>

#include "hrmod/index_set.hpp"

namespace hrmod {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense symmetric matrix. Construction symmetrizes the input as (M + M^T)/2,
/// so entries are exactly symmetric afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(int dim) { return SymMatrix(Matrix::Zero(dim, dim)); }
  static SymMatrix identity(int dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& dense() const { return m_; }

  /// Principal submatrix on the rows/columns of `idx`, in sorted order.
  SymMatrix sub(IndexSet idx) const;

  /// Largest absolute entry.
  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

 private:
  Matrix m_;
};

/// The (d+1)x(d+1) symmetric matrix [[inner, border], [border^T, corner]].
struct BorderedMatrix {
  SymMatrix inner;
  Vector border;
  double corner = 0.0;

  int dim() const { return inner.dim() + 1; }
  Matrix assemble() const;
};

/// Rows/columns of `m` selected by two index sets (sorted order).
Matrix submatrix(const Matrix& m, IndexSet rows, IndexSet cols);
Vector subvector(const Vector& v, IndexSet idx);

double det(const Matrix& m);
double det(const SymMatrix& m);
double det(const BorderedMatrix& m);

/// Product of the eigenvalues whose magnitude exceeds
/// rank_tol * max(1, spectral radius); 1 when none do.
double pseudo_det(const SymMatrix& m, double rank_tol);

/// M_{K,K} - M_{K,E} M_{E,E}^{-1} M_{E,K} with E the complement of `keep`.
/// Throws SingularBlock when M_{E,E} is numerically singular.
SymMatrix schur_complement(const SymMatrix& m, IndexSet keep, double tol = 1e-12);

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns orthonormal
};

EigenDecomposition eigen_sym(const SymMatrix& m);

/// Orthonormal basis of the hyperplane orthogonal to the all-ones vector,
/// as a d x (d-1) matrix.
Matrix ones_complement_basis(int d);

/// Hadamard bound: product of the Euclidean norms of the rows. Used to turn a
/// determinant into a scale-free residual.
double hadamard_scale(const Matrix& m);

}  // namespace hrmod
