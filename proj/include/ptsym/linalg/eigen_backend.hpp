#pragma once

// Dense factorizations that are delegated to Eigen: blocked Householder QR
// for the large least-squares solves and a reference complex eigensolver.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/matrix.hpp"

namespace ptsym::backend {

template <typename T>
using EigenMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

/// In-place Householder QR least squares on an m x n column-major buffer.
/// On return `a` holds the factors and `rdiag` the |R_ii|.
template <typename T>
std::vector<T> least_squares(std::vector<T>& a, std::size_t m, std::size_t n, const std::vector<T>& b,
                             std::vector<double>& rdiag) {
  if (a.size() != m * n || b.size() != m) throw InvalidArgument("least_squares: buffer size mismatch");
  Eigen::Map<EigenMatrix<T>> map(a.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  Eigen::HouseholderQR<Eigen::Ref<EigenMatrix<T>>> qr(map);
  const Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> rhs(b.data(), static_cast<Eigen::Index>(m));
  const Eigen::Matrix<T, Eigen::Dynamic, 1> x = qr.solve(rhs);
  rdiag.resize(n);
  for (std::size_t i = 0; i < n; ++i) rdiag[i] = std::abs(qr.matrixQR()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
  return {x.data(), x.data() + x.size()};
}

/// Eigenvalues from Eigen's complex Schur decomposition.
inline std::vector<complex> reference_eigenvalues(const ComplexMatrix& m) {
  if (!m.square()) throw InvalidArgument("reference_eigenvalues: matrix is not square");
  const auto n = static_cast<Eigen::Index>(m.rows());
  EigenMatrix<complex> a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::ComplexEigenSolver<EigenMatrix<complex>> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("reference_eigenvalues: Eigen solver did not converge");
  const auto& w = es.eigenvalues();
  return {w.data(), w.data() + w.size()};
}

/// Singular values in ascending order via Jacobi SVD.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  EigenMatrix<complex> a(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  Eigen::JacobiSVD<EigenMatrix<complex>> svd(a);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end());
  return out;
}

/// Solve a small dense real system with partial-pivoting LU.
inline std::vector<double> solve_dense(const RealMatrix& a, const std::vector<double>& b) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  if (!a.square() || b.size() != a.rows()) throw InvalidArgument("solve_dense: shape mismatch");
  EigenMatrix<double> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::FullPivLU<EigenMatrix<double>> lu(m);
  if (!lu.isInvertible()) throw NumericalError("solve_dense: singular system");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  const Eigen::VectorXd x = lu.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

}  // namespace ptsym::backend
