#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace stocheck {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = std::int64_t;

/// (A + A^T)/2 — used after every moment/Gramian recursion step to control drift.
inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Column-stacking vec; unvec is its inverse for n x n matrices.
inline Vector vec(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

/// Vectorized moment map: vec(F X F^T + G X G^T) = (F (x) F + G (x) G) vec(X).
inline Matrix moment_operator(const Matrix& f, const Matrix& g) {
  return kron(f, f) + kron(g, g);
}

/// Vectorized adjoint map: vec(F^T P F + G^T P G).
inline Matrix adjoint_moment_operator(const Matrix& f, const Matrix& g) {
  return kron(f.transpose(), f.transpose()) + kron(g.transpose(), g.transpose());
}

inline double spectral_radius(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of a symmetric matrix.
inline double lambda_min(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double lambda_max(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// PSD within the drift tolerance used throughout: lambda_min >= -1e-10 * ||A||.
inline bool is_psd(const Matrix& a, double scale_tol = 1e-10) {
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, max_abs(a));
  return lambda_min(a) >= -scale_tol * scale;
}

/// Orthonormal basis of the numerical kernel of a symmetric PSD matrix.
/// Eigenvalues below threshold * lambda_max count as zero; a zero matrix
/// yields the full space.
inline Matrix kernel_basis(const Matrix& a, double threshold = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  const Vector evals = es.eigenvalues();
  const double lmax = evals.cwiseAbs().maxCoeff();
  if (lmax == 0.0) return Matrix::Identity(a.rows(), a.cols());
  const double cut = threshold * lmax;
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (std::abs(evals(i)) <= cut) ++count;
  Matrix basis(a.rows(), count);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (std::abs(evals(i)) <= cut) basis.col(col++) = es.eigenvectors().col(i);
  return basis;
}

/// Nearest PSD matrix: eigendecompose and clamp negative eigenvalues at zero.
inline Matrix psd_projection(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  Vector evals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().transpose();
}

/// sin of the largest principal angle between the column spans of two
/// orthonormal bases, computed as ||V1 V1^T - V2 V2^T||_2.
inline double subspace_gap(const Matrix& v1, const Matrix& v2) {
  const Eigen::Index n = v1.rows();
  Matrix p1 = v1.cols() == 0 ? Matrix::Zero(n, n) : Matrix(v1 * v1.transpose());
  Matrix p2 = v2.cols() == 0 ? Matrix::Zero(n, n) : Matrix(v2 * v2.transpose());
  Eigen::JacobiSVD<Matrix> svd(p1 - p2);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

}  // namespace stocheck
