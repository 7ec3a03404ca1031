#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

struct HermitianEigen {
  std::vector<double> values;  ///< ascending
  ComplexMatrix vectors;       ///< unitary; column k belongs to values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of a(p,q) with a diagonal unitary,
/// then applies the real symmetric Jacobi rotation, so the combined rotation
///   G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
/// zeroes the (p,q) entry of G† A G. Sweeps stop once the off-diagonal
/// Frobenius mass falls below tol.jacobi_offdiag * ||A||_F.
inline HermitianEigen hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {}) {
  if (!m.square()) throw InvalidArgument("hermitian_eig: matrix is not square");
  const std::size_t n = m.rows();
  const double scale = std::max(max_abs(m), 1e-300);
  const double herm = hermiticity_residual(m);
  if (herm > tol.linalg * scale && herm > 1e-300) {
    std::ostringstream os;
    os << "hermitian_eig: input is not Hermitian (max|M - M^dagger| = " << herm << ", max|M| = " << scale << ")";
    throw InvalidArgument(os.str());
  }

  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double fro = frobenius_norm(a);
  const double stop = tol.jacobi_offdiag * fro;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0 || r < 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal at working precision.
        if (sweep > 3 && r < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const complex phase = apq / r;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const complex em = std::conj(phase);  // e^{-i phi}

        // Columns: A <- A G
        for (std::size_t k = 0; k < n; ++k) {
          const complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * em * akq;
          a(k, q) = s * akp + c * em * akq;
        }
        // Rows: A <- G† A
        for (std::size_t k = 0; k < n; ++k) {
          const complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * em * vkq;
          v(k, q) = s * vkp + c * em * vkq;
        }
      }
    }
  }
  if (off_norm() > std::max(stop, 1e3 * 1e-16 * fro)) {
    throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// f(M) for Hermitian M via its eigendecomposition: V f(Λ) V†.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f, const Tolerances& tol = {}) {
  const auto eig = hermitian_eig(m, tol);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const complex fk = f(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const complex vik = eig.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

}  // namespace ptsym
