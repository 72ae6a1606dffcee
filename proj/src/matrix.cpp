#include "hrmod/matrix.hpp"

#include <cmath>

#include "hrmod/error.hpp"

namespace hrmod {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::NotSquare, std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::sub(IndexSet idx) const { return SymMatrix(submatrix(m_, idx, idx)); }

Matrix BorderedMatrix::assemble() const {
  const int d = inner.dim();
  if (border.size() != d) throw Error(ErrorCode::NotSquare, "border length does not match inner dimension");
  Matrix out(d + 1, d + 1);
  out.topLeftCorner(d, d) = inner.dense();
  out.topRightCorner(d, 1) = border;
  out.bottomLeftCorner(1, d) = border.transpose();
  out(d, d) = corner;
  return out;
}

Matrix submatrix(const Matrix& m, IndexSet rows, IndexSet cols) {
  const auto r = rows.elements();
  const auto c = cols.elements();
  if (rows.bound() > m.rows() || cols.bound() > m.cols())
    throw Error(ErrorCode::BadIndexSets, "index set exceeds matrix dimension");
  Matrix out(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = m(r[i], c[j]);
  return out;
}

Vector subvector(const Vector& v, IndexSet idx) {
  const auto e = idx.elements();
  if (idx.bound() > v.size()) throw Error(ErrorCode::BadIndexSets, "index set exceeds vector length");
  Vector out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out(i) = v(e[i]);
  return out;
}

double det(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "determinant of a non-square matrix");
  if (m.rows() == 0) return 1.0;
  return m.fullPivLu().determinant();
}

double det(const SymMatrix& m) { return det(m.dense()); }

double det(const BorderedMatrix& m) { return det(m.assemble()); }

double pseudo_det(const SymMatrix& m, double rank_tol) {
  if (m.dim() == 0) return 1.0;
  const auto eig = eigen_sym(m);
  const double radius = eig.values.cwiseAbs().maxCoeff();
  const double threshold = rank_tol * std::max(1.0, radius);
  double prod = 1.0;
  for (int i = 0; i < eig.values.size(); ++i)
    if (std::abs(eig.values(i)) > threshold) prod *= eig.values(i);
  return prod;
}

SymMatrix schur_complement(const SymMatrix& m, IndexSet keep, double tol) {
  const IndexSet all = IndexSet::full(m.dim());
  if (!keep.is_subset_of(all)) throw Error(ErrorCode::BadIndexSets, "keep set exceeds dimension");
  const IndexSet elim = all - keep;
  if (elim.empty()) return m;
  const Matrix& d = m.dense();
  const Matrix mkk = submatrix(d, keep, keep);
  const Matrix mke = submatrix(d, keep, elim);
  const Matrix mee = submatrix(d, elim, elim);
  Eigen::FullPivLU<Matrix> lu(mee);
  lu.setThreshold(tol);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularBlock, "eliminated block " + elim.to_string() + " is singular");
  return SymMatrix(mkk - mke * lu.solve(mke.transpose()));
}

EigenDecomposition eigen_sym(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.dense());
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix ones_complement_basis(int d) {
  // Householder reflection mapping e_0 to the normalized ones vector; its
  // remaining columns span the orthogonal complement.
  Vector u = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  u(0) -= 1.0;
  Matrix h = Matrix::Identity(d, d);
  const double nrm2 = u.squaredNorm();
  if (nrm2 > 0.0) h -= 2.0 * u * u.transpose() / nrm2;
  return h.rightCols(d - 1);
}

double hadamard_scale(const Matrix& m) {
  double prod = 1.0;
  for (int i = 0; i < m.rows(); ++i) prod *= m.row(i).norm();
  return prod;
}

}  // namespace hrmod
