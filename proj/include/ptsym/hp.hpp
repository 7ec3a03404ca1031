#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/eigen_backend.hpp"

namespace ptsym {

/// Large-S limit of the spin model, Gamma > g.
struct HPResult {
  double sz_deviation = 0.0;  ///< n = g^2 / (2 (Gamma^2 - g^2)); <S^z_A> = S - n, <S^z_B> = -S + n
  double purity = 0.0;        ///< 1 - g^2/Gamma^2
  double negativity = 0.0;    ///< g / (2 Gamma)
  double delta_infinity = 0.0;  ///< 1 / (2n + 1)
};

namespace detail {
inline void require_stable(double g, double gamma, const char* who) {
  if (!(g > 0.0) || !(gamma > g) || !std::isfinite(gamma)) {
    std::ostringstream os;
    os << who << ": requires Gamma > g > 0 (got g = " << g << ", Gamma = " << gamma
       << "); the linearized fluctuations diverge at Gamma = g";
    throw InvalidArgument(os.str());
  }
}
}  // namespace detail

inline HPResult hp_curves(double g, double gamma) {
  detail::require_stable(g, gamma, "hp_curves");
  HPResult r;
  const double x = g / gamma;
  r.sz_deviation = g * g / (2.0 * (gamma * gamma - g * g));
  r.purity = 1.0 - x * x;
  r.negativity = x / 2.0;
  r.delta_infinity = 1.0 / (2.0 * r.sz_deviation + 1.0);
  return r;
}

struct GaussianMoments {
  double n_a = 0.0;           ///< <a†a>
  double n_b = 0.0;           ///< <b†b>
  std::complex<double> m;     ///< <ab>
  std::array<double, 16> covariance{};  ///< (x_a, p_a, x_b, p_b), vacuum = identity, row-major
  double purity = 0.0;
  double negativity = 0.0;
  double delta = 0.0;  ///< |<O_A†O_A> - <O_B†O_B>| / sum with O_A ~ a, O_B ~ b†
};

/// Second moments of the linearized model H = g(ab + a†b†) with loss
/// c_A = sqrt(2 Gamma) a and c_B = sqrt(2 Gamma) b, then Gaussian purity and
/// negativity from the covariance matrix.
///
/// Moment equations (m = <ab>):
///   d<a†a>/dt = -2 Gamma <a†a> + i g (m - m*)
///   d<b†b>/dt = -2 Gamma <b†b> + i g (m - m*)
///   dm/dt     = -i g (<a†a> + <b†b> + 1) - 2 Gamma m
/// Written for (n_a, n_b, Re m, Im m) this is a 4 x 4 real linear system whose
/// stationary point is stable only for Gamma > g.
inline GaussianMoments gaussian_oracle(double g, double gamma) {
  detail::require_stable(g, gamma, "gaussian_oracle");
  // A x = rhs for x = (n_a, n_b, mr, mi).
  RealMatrix a(4, 4);
  // i g (m - m*) = -2 g mi
  a(0, 0) = -2.0 * gamma;
  a(0, 3) = -2.0 * g;
  a(1, 1) = -2.0 * gamma;
  a(1, 3) = -2.0 * g;
  // Re: -2 Gamma mr = 0; Im: -g (n_a + n_b + 1) - 2 Gamma mi = 0
  a(2, 2) = -2.0 * gamma;
  a(3, 0) = -g;
  a(3, 1) = -g;
  a(3, 3) = -2.0 * gamma;
  const std::vector<double> b = backend::solve_dense(a, {0.0, 0.0, 0.0, g});

  GaussianMoments out;
  out.n_a = b[0];
  out.n_b = b[1];
  out.m = {b[2], b[3]};

  // x = a + a†, p = -i(a - a†): <x^2> = 2n+1, <x_a x_b> = 2 Re m, <x_a p_b> = 2 Im m, <p_a p_b> = -2 Re m.
  const double ca = 2.0 * out.n_a + 1.0, cb = 2.0 * out.n_b + 1.0;
  const double mr = 2.0 * out.m.real(), mi = 2.0 * out.m.imag();
  out.covariance = {ca, 0.0, mr, mi,   //
                    0.0, ca, mi, -mr,  //
                    mr, mi, cb, 0.0,   //
                    mi, -mr, 0.0, cb};
  const double det = Eigen::Matrix4d(out.covariance.data()).determinant();
  out.purity = 1.0 / std::sqrt(det);

  const double det_a = ca * ca, det_b = cb * cb, det_c = -mr * mr - mi * mi;
  const double tilde = det_a + det_b - 2.0 * det_c;  // partial transpose flips the sign of det C
  const double nu2 = (tilde - std::sqrt(std::max(tilde * tilde - 4.0 * det, 0.0))) / 2.0;
  const double nu = std::sqrt(nu2);
  out.negativity = nu < 1.0 ? (1.0 / nu - 1.0) / 2.0 : 0.0;

  out.delta = std::abs(out.n_a - out.n_b - 1.0) / (out.n_a + out.n_b + 1.0);
  return out;
}

}  // namespace ptsym
