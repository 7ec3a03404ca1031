#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/liouvillian.hpp"
#include "ptsym/linalg/general_eig.hpp"
#include "ptsym/linalg/eigen_backend.hpp"
#include "ptsym/models.hpp"
#include "ptsym/ode.hpp"
#include "ptsym/steadystate.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

enum class EigenBackend { qr, reference };

struct SpectrumResult {
  std::vector<complex> eigenvalues;  ///< sorted by real part, descending
  double gap = 0.0;                  ///< -max Re(lambda) over |lambda| > zero threshold
  double norm = 0.0;                 ///< ||L||_F
  complex trace{};                   ///< trace of L
};

/// Full Liouvillian spectrum. The default backend is the in-house Hessenberg
/// QR; `reference` uses Eigen's complex Schur solver.
inline SpectrumResult liouvillian_spectrum(const LindbladModel& model, EigenBackend backend = EigenBackend::qr,
                                           const Tolerances& tol = {}) {
  const Superoperator l = assemble(model, SuperFormat::dense, tol);
  SpectrumResult out;
  out.norm = l.frobenius_norm();
  out.trace = trace(*l.dense);
  out.eigenvalues = backend == EigenBackend::qr ? general_eig(*l.dense, tol) : backend::reference_eigenvalues(*l.dense);
  std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](complex a, complex b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  const double zero = tol.physics * out.norm;
  out.gap = std::numeric_limits<double>::infinity();
  for (const auto& z : out.eigenvalues)
    if (std::abs(z) > zero) out.gap = std::min(out.gap, -z.real());
  return out;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<double> sz_a, sz_b;  ///< local diagonal observable (S^z or n)
  std::vector<double> trace_error;
  std::vector<double> hermiticity_error;
  std::vector<double> purity;
  ComplexMatrix final_state;
};

/// Integrate the master equation from rho0 and sample every dt_out up to
/// t_max. No trace renormalization is applied.
inline Trajectory evolve(const LindbladModel& model, const ComplexMatrix& rho0, double t_max, double dt_out,
                         const Tolerances& tol = {}) {
  const std::size_t n = model.dim();
  if (rho0.rows() != n || rho0.cols() != n) throw InvalidArgument("evolve: initial state has the wrong dimension");
  if (!(t_max > 0.0) || !(dt_out > 0.0)) throw InvalidArgument("evolve: t_max and dt_out must be positive");
  if (!model.local_z) throw InvalidArgument("evolve: model has no local diagonal observable");

  const ComplexMatrix za = on_a(*model.local_z), zb = on_b(*model.local_z);
  const LindbladRhs rhs(model);
  OdeOptions opts;
  opts.atol = tol.ode_atol;
  opts.rtol = tol.ode_rtol;
  opts.max_rhs_evals = tol.rhs_budget;
  DormandPrince ode([&rhs](const ComplexMatrix& r) { return rhs(r); }, opts);

  Trajectory tr;
  ComplexMatrix rho = rho0;
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.sz_a.push_back(expectation(rho, za).real());
    tr.sz_b.push_back(expectation(rho, zb).real());
    tr.trace_error.push_back(std::abs(trace(rho) - 1.0));
    tr.hermiticity_error.push_back(hermiticity_residual(rho));
    tr.purity.push_back(purity(rho));
  };
  record(0.0);
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt_out + 1e-9));
  double t = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double next = static_cast<double>(k) * dt_out;
    ode.advance(t, rho, next);
    record(t);
  }
  tr.final_state = std::move(rho);
  return tr;
}

/// |psi><psi|
inline ComplexMatrix projector(std::span<const complex> psi) {
  ComplexMatrix p(psi.size(), psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) p(i, j) = psi[i] * std::conj(psi[j]);
  return p;
}

/// The dark product with the subsystems swapped. For the spin model this is
/// |-S><-S| ⊗ |S><S|, the state farthest from the broken-phase steady state.
inline ComplexMatrix swapped_dark_state(const LindbladModel& model, const Tolerances& tol = {}) {
  const ComplexVector dark = dark_state(model, tol);
  return projector(model.pt.parity * dark);
}

enum class DynamicsClass { oscillatory, overdamped };

inline std::string_view to_string(DynamicsClass c) {
  return c == DynamicsClass::oscillatory ? "oscillatory" : "overdamped";
}

/// Oscillatory iff sz_a - sz_inf changes sign at least twice. Samples whose
/// deviation is below `deadband` times the largest deviation are ignored.
inline DynamicsClass classify_dynamics(const Trajectory& traj, double sz_inf, double deadband = 1e-6) {
  if (traj.sz_a.size() < 10) throw InvalidArgument("classify_dynamics: need at least 10 samples");
  double maxdev = 0.0;
  for (double s : traj.sz_a) maxdev = std::max(maxdev, std::abs(s - sz_inf));
  if (maxdev == 0.0) return DynamicsClass::overdamped;
  int changes = 0, last = 0;
  for (double s : traj.sz_a) {
    const double dev = s - sz_inf;
    if (std::abs(dev) <= deadband * maxdev) continue;
    const int sign = dev > 0 ? 1 : -1;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes >= 2 ? DynamicsClass::oscillatory : DynamicsClass::overdamped;
}

/// Stationary value of <z_A> used as the classification offset: direct
/// solve when the model is small enough, otherwise the mean of the last 10%
/// of the trajectory.
inline double stationary_sz_a(const LindbladModel& model, const Trajectory& traj, const Tolerances& tol = {}) {
  if (model.dim() <= tol.dense_cap && model.gamma > 0.0) {
    const auto ss = solve_direct(model, tol);
    return expectation(ss.rho, on_a(*model.local_z)).real();
  }
  const std::size_t m = std::max<std::size_t>(1, traj.sz_a.size() / 10);
  double s = 0.0;
  for (std::size_t k = traj.sz_a.size() - m; k < traj.sz_a.size(); ++k) s += traj.sz_a[k];
  return s / static_cast<double>(m);
}

}  // namespace ptsym
