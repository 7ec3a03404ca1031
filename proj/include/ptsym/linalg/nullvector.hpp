#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <span>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/eigen_backend.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

namespace detail {

/// Least-squares solve of the (n+1) x n column-major augmented system
/// [L; t^T] x = [0; 1] held in `a` (overwritten by its QR factors). Returns
/// the R-diagonal ratio; throws DegenerateNullSpace when it is <= tol.linalg.
template <typename T>
double solve_augmented(std::vector<T>& a, std::size_t n, std::vector<T>& x, const Tolerances& tol) {
  const std::size_t m = n + 1;
  if (a.size() != m * n) throw InvalidArgument("solve_augmented: buffer is not (n+1) x n");
  std::vector<T> b(m, T(0));
  b[n] = T(1);
  std::vector<double> rdiag;
  std::vector<T> sol = backend::least_squares(a, m, n, b, rdiag);

  double rmax = 0.0, rmin = INFINITY;
  for (double r : rdiag) {
    rmax = std::max(rmax, r);
    rmin = std::min(rmin, r);
  }
  const double ratio = rmax > 0.0 ? rmin / rmax : 0.0;
  if (!(ratio > tol.linalg)) {
    std::ostringstream os;
    os << "constrained_nullvector: augmented system is rank deficient (min|R_ii|/max|R_ii| = " << ratio
       << "); the null space has more than one direction";
    throw DegenerateNullSpace(os.str(), ratio);
  }
  x = std::move(sol);
  return ratio;
}

}  // namespace detail

template <typename T>
struct NullVectorResult {
  std::vector<T> x;
  double residual = 0.0;       ///< ||L x||_2
  double rdiag_ratio = 0.0;    ///< min|R_ii| / max|R_ii| of the augmented QR
};

/// Solve the augmented least-squares system [L; t^T] x = [0; 1].
///
/// When L has a single null direction x0 with t^T x0 != 0 the solution is
/// x0 / (t^T x0) with zero residual. A second null direction makes the
/// augmented matrix rank deficient, which shows up as a vanishing diagonal
/// entry of its R factor (|R_ii| >= sigma_min, so a tiny R_ii is never a
/// false alarm); that case throws DegenerateNullSpace.
template <typename T>
NullVectorResult<T> constrained_nullvector(const Matrix<T>& l, std::span<const T> t, const Tolerances& tol = {}) {
  if (!l.square()) throw InvalidArgument("constrained_nullvector: L is not square");
  if (t.size() != l.cols()) throw InvalidArgument("constrained_nullvector: constraint length mismatch");
  const bool t_nonzero = std::any_of(t.begin(), t.end(), [](const T& v) { return v != T(0); });
  if (!t_nonzero) throw InvalidArgument("constrained_nullvector: constraint vector is zero");

  const std::size_t n = l.cols();
  const std::size_t m = n + 1;
  std::vector<T> a(m * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = l.row(i);
    for (std::size_t j = 0; j < n; ++j) a[j * m + i] = row[j];
  }
  for (std::size_t j = 0; j < n; ++j) a[j * m + n] = t[j];
  std::vector<T> b;
  const double ratio = detail::solve_augmented(a, n, b, tol);

  NullVectorResult<T> out;
  out.x = std::move(b);
  const auto lx = l * std::span<const T>(out.x);
  double s = 0.0;
  for (const auto& v : lx) s += std::norm(v);
  out.residual = std::sqrt(s);
  out.rdiag_ratio = ratio;
  return out;
}

template <typename T>
NullVectorResult<T> constrained_nullvector(const Matrix<T>& l, const std::vector<T>& t, const Tolerances& tol = {}) {
  return constrained_nullvector(l, std::span<const T>(t), tol);
}

}  // namespace ptsym
