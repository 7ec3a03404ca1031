#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

/// Thrown when the shifted QR iteration exhausts its sweep budget.
class EigenNonConvergence : public NumericalError {
public:
  EigenNonConvergence(const std::string& what, std::vector<complex> converged_, std::size_t active_)
      : NumericalError(what), converged(std::move(converged_)), active_size(active_) {}
  std::vector<complex> converged;  ///< eigenvalues deflated before the cap was hit
  std::size_t active_size;         ///< size of the block still unreduced
};

namespace detail {

// Parlett-Reinsch diagonal similarity; radix-2 scaling keeps it exact.
inline void balance(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha_norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha_norm += std::norm(a(i, k));
    alpha_norm = std::sqrt(alpha_norm);
    if (alpha_norm == 0.0) continue;
    const complex x0 = a(k + 1, k);
    const complex phase = std::abs(x0) == 0.0 ? complex(1) : x0 / std::abs(x0);
    const complex alpha = -phase * alpha_norm;
    // v = x - alpha e1, normalized
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vn = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn += std::norm(v[i]);
    vn = std::sqrt(vn);
    if (vn == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    // A <- (I - 2vv†) A
    for (std::size_t j = k; j < n; ++j) {
      complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
    }
    // A <- A (I - 2vv†)
    for (std::size_t i = 0; i < n; ++i) {
      complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * std::conj(v[j]);
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

}  // namespace detail

/// All eigenvalues of a general complex square matrix.
///
/// Balancing, Householder reduction to Hessenberg form, then single-shift
/// complex QR with Wilkinson shifts and deflation at small subdiagonals
/// (exceptional shifts every 10 stalled iterations). The total iteration
/// count is capped at tol.qr_sweeps_per_n * n.
inline std::vector<complex> general_eig(const ComplexMatrix& m, const Tolerances& tol = {}) {
  if (!m.square()) throw InvalidArgument("general_eig: matrix is not square");
  const std::size_t n = m.rows();
  std::vector<complex> eig(n);
  if (n == 0) return eig;

  ComplexMatrix h = m;
  detail::balance(h);
  detail::hessenberg(h);

  const std::size_t cap = tol.qr_sweeps_per_n * n;
  std::size_t total = 0;
  std::size_t stalled = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  std::vector<double> cs(n);
  std::vector<complex> sn(n);

  auto abs1 = [](complex z) { return std::abs(z.real()) + std::abs(z.imag()); };

  while (hi >= 0) {
    // Find the start of the active unreduced block.
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      const double sub = abs1(h(lo, lo - 1));
      double ref = abs1(h(lo, lo)) + abs1(h(lo - 1, lo - 1));
      if (ref == 0.0) {
        for (std::ptrdiff_t j = 0; j <= hi; ++j) ref = std::max(ref, abs1(h(lo, j)));
      }
      if (sub <= tol.qr_deflation * ref || sub < 1e-300) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      stalled = 0;
      continue;
    }
    if (++total > cap) {
      std::vector<complex> done(eig.begin() + hi + 1, eig.end());
      std::ostringstream os;
      os << "general_eig: QR iteration cap (" << cap << ") reached with " << done.size() << " of " << n
         << " eigenvalues deflated";
      throw EigenNonConvergence(os.str(), std::move(done), static_cast<std::size_t>(hi + 1));
    }
    ++stalled;

    complex mu;
    if (stalled % 10 == 0) {
      // Exceptional shift to break cycles.
      mu = h(hi, hi) + complex(abs1(h(hi, hi - 1)) + (hi >= 2 ? abs1(h(hi - 1, hi - 2)) : 0.0), 0.0) * 0.75;
    } else {
      const complex a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
      const complex half_tr = 0.5 * (a + d);
      const complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
      const complex e1 = half_tr + disc, e2 = half_tr - disc;
      mu = std::abs(e1 - d) < std::abs(e2 - d) ? e1 : e2;
    }

    // One QR step on the block lo..hi: H - mu I = QR, H <- RQ + mu I.
    for (std::ptrdiff_t k = lo; k <= hi; ++k) h(k, k) -= mu;
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      const complex x = h(k, k), y = h(k + 1, k);
      const double ax = std::abs(x), ay = std::abs(y);
      double c;
      complex s;
      if (ay == 0.0) {
        c = 1.0;
        s = 0.0;
      } else if (ax == 0.0) {
        c = 0.0;
        s = std::conj(y) / ay;
      } else {
        const double r = std::hypot(ax, ay);
        c = ax / r;
        s = (x / ax) * std::conj(y) / r;
      }
      cs[k] = c;
      sn[k] = s;
      // rows k, k+1: [c, s; -conj(s), c]
      for (std::ptrdiff_t j = k; j <= hi; ++j) {
        const complex t1 = h(k, j), t2 = h(k + 1, j);
        h(k, j) = c * t1 + s * t2;
        h(k + 1, j) = -std::conj(s) * t1 + c * t2;
      }
    }
    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      const double c = cs[k];
      const complex s = sn[k];
      const std::ptrdiff_t last = std::min(k + 2, hi);
      for (std::ptrdiff_t i = lo; i <= last; ++i) {
        const complex t1 = h(i, k), t2 = h(i, k + 1);
        h(i, k) = c * t1 + std::conj(s) * t2;
        h(i, k + 1) = -s * t1 + c * t2;
      }
    }
    for (std::ptrdiff_t k = lo; k <= hi; ++k) h(k, k) += mu;
  }
  return eig;
}

}  // namespace ptsym
