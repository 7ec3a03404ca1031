#pragma once

#include <cstddef>

namespace ptsym {

/// Every numerical threshold used by the library, in one place.
///
/// Library functions take a `const Tolerances&` (defaulted to `Tolerances{}`),
/// and the CLI exposes each field as a `--tol-*` flag.
struct Tolerances {
  // Linear algebra.
  double linalg = 1e-10;          ///< Hermiticity checks, orthonormality, null-space rank test.
  double jacobi_offdiag = 1e-15;  ///< Jacobi stops once off(A) <= this * ||A||_F.
  double qr_deflation = 1e-15;    ///< Subdiagonal deflation threshold relative to neighbours.
  std::size_t qr_sweeps_per_n = 100;

  // Physics residuals.
  double physics = 1e-8;
  double pt_relative = 1e-10;     ///< PT check passes when ||L' - L||_F <= this * ||L||_F.
  double degeneracy = 1e-8;       ///< |E_n - E_m| <= this * max|E| counts as degenerate.
  double positivity_clip = 1e-8;  ///< eigenvalues in [-clip, 0) are roundoff; below is an error.
  double delta_guard = 1e-14;     ///< denominator floor of the symmetry parameter.

  // Relaxation backend and time evolution.
  double relax_rtol = 1e-8;       ///< stop when ||drho/dt||_F <= relax_rtol * Gamma.
  double ode_atol = 1e-10;
  double ode_rtol = 1e-8;
  std::size_t rhs_budget = 10'000'000;

  // Dense superoperators are refused above this Hilbert dimension.
  std::size_t dense_cap = 120;
};

}  // namespace ptsym
