#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/liouvillian.hpp"
#include "ptsym/linalg/hermitian_eig.hpp"
#include "ptsym/linalg/nullvector.hpp"
#include "ptsym/linalg/partial_transpose.hpp"
#include "ptsym/models.hpp"
#include "ptsym/ode.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

enum class Backend { direct, relax, auto_select };

inline std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::direct: return "direct";
    case Backend::relax: return "relax";
    case Backend::auto_select: return "auto";
  }
  return "unknown";
}

inline Backend parse_backend(std::string_view s) {
  if (s == "direct") return Backend::direct;
  if (s == "relax") return Backend::relax;
  if (s == "auto") return Backend::auto_select;
  throw InvalidArgument("unknown solver backend '" + std::string(s) + "'");
}

struct SteadyStateResult {
  ComplexMatrix rho;
  double residual = 0.0;  ///< ||L rho||_F
  Backend solver = Backend::direct;
  std::size_t iterations = 0;  ///< right-hand-side evaluations (relax) or 1 (direct)
  double rdiag_ratio = 0.0;    ///< direct backend only
};

namespace detail {

/// Real coordinates of a Hermitian n x n matrix: the n diagonal entries,
/// then Re and Im of each upper-triangle entry (i < j) in row order.
class HermitianCoordinates {
public:
  explicit HermitianCoordinates(std::size_t n) : n_(n) {}

  std::size_t size() const noexcept { return n_ * n_; }
  std::size_t diag(std::size_t i) const noexcept { return i; }
  /// Index of Re(rho_ij), i < j; Im follows at +1.
  std::size_t re(std::size_t i, std::size_t j) const noexcept {
    return n_ + 2 * (i * (2 * n_ - i - 1) / 2 + (j - i - 1));
  }

  ComplexMatrix to_matrix(std::span<const double> x) const {
    ComplexMatrix rho(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      rho(i, i) = x[diag(i)];
      for (std::size_t j = i + 1; j < n_; ++j) {
        const std::size_t k = re(i, j);
        rho(i, j) = complex(x[k], x[k + 1]);
        rho(j, i) = complex(x[k], -x[k + 1]);
      }
    }
    return rho;
  }

private:
  std::size_t n_;
};

/// The Liouvillian restricted to Hermitian matrices, as a real N x N matrix
/// (N = n^2) in HermitianCoordinates, written column-major into the top N
/// rows of an (N+1) x N buffer. The last row holds the trace functional.
inline std::vector<double> real_form_augmented(const SparseMatrix& l, std::size_t n) {
  const HermitianCoordinates hc(n);
  const std::size_t nn = hc.size(), m = nn + 1;
  std::vector<double> a(m * nn, 0.0);
  const auto off = l.offsets();
  const auto cols = l.columns();
  const auto vals = l.values();
  for (std::size_t r = 0; r < l.rows(); ++r) {
    const std::size_t k = r % n, lcol = r / n;  // output entry (k, l)
    if (k > lcol) continue;
    for (std::size_t e = off[r]; e < off[r + 1]; ++e) {
      const std::size_t c = cols[e];
      const std::size_t i = c % n, j = c / n;  // input entry (i, j)
      const complex v = vals[e];
      // rho_ij expressed through the real coordinates: (index, coefficient) pairs.
      std::size_t idx[2];
      complex coef[2];
      int terms = 0;
      if (i == j) {
        idx[0] = hc.diag(i);
        coef[0] = 1.0;
        terms = 1;
      } else if (i < j) {
        idx[0] = hc.re(i, j);
        coef[0] = 1.0;
        idx[1] = idx[0] + 1;
        coef[1] = complex(0, 1);
        terms = 2;
      } else {
        idx[0] = hc.re(j, i);
        coef[0] = 1.0;
        idx[1] = idx[0] + 1;
        coef[1] = complex(0, -1);
        terms = 2;
      }
      for (int t = 0; t < terms; ++t) {
        const complex w = v * coef[t];
        double* col = a.data() + idx[t] * m;
        if (k == lcol) {
          col[hc.diag(k)] += w.real();
        } else {
          const std::size_t row = hc.re(k, lcol);
          col[row] += w.real();
          col[row + 1] += w.imag();
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) a[hc.diag(i) * m + nn] = 1.0;
  return a;
}

inline void normalize_trace(ComplexMatrix& rho) {
  const complex tr = trace(rho);
  if (std::abs(tr) == 0.0) throw NumericalError("steady state has zero trace");
  rho *= complex(1.0 / tr.real());
}

}  // namespace detail

/// Direct backend: constrained null vector of L with the trace as constraint.
///
/// The solve runs on the real form of L over Hermitian matrices, which has
/// the same null space as L restricted to Hermitian inputs and is four times
/// cheaper than the complex system.
inline SteadyStateResult solve_direct(const LindbladModel& model, const Tolerances& tol = {}) {
  const std::size_t n = model.dim();
  const SparseMatrix l = liouvillian_sparse(model.h, model.jumps);
  std::vector<double> a = detail::real_form_augmented(l, n);
  std::vector<double> x;
  const double ratio = detail::solve_augmented(a, n * n, x, tol);

  SteadyStateResult out;
  out.rho = detail::HermitianCoordinates(n).to_matrix(x);
  detail::normalize_trace(out.rho);
  out.residual = vector_norm(l.multiply(vec(out.rho)));
  out.solver = Backend::direct;
  out.iterations = 1;
  out.rdiag_ratio = ratio;
  return out;
}

/// Relax backend: integrate from the fully mixed state until
/// ||drho/dt||_F <= tol.relax_rtol * Gamma.
inline SteadyStateResult solve_relax(const LindbladModel& model, const Tolerances& tol = {}) {
  const std::size_t n = model.dim();
  const LindbladRhs rhs(model);
  OdeOptions opts;
  opts.atol = tol.ode_atol;
  opts.rtol = tol.ode_rtol;
  opts.max_rhs_evals = tol.rhs_budget;
  // Keep h * lambda inside the stability region. At its edge the step-size
  // controller oscillates and leaves ||drho/dt|| at a floor set by the error
  // tolerance rather than converging.
  opts.max_step = 2.5 / liouvillian_radius_bound(model);
  DormandPrince ode([&rhs](const ComplexMatrix& r) { return rhs(r); }, opts);

  ComplexMatrix rho = ComplexMatrix::identity(n);
  rho *= complex(1.0 / static_cast<double>(n));
  const double target = tol.relax_rtol * model.gamma;
  double t = 0.0;
  bool converged = false;
  ode.advance(t, rho, std::numeric_limits<double>::infinity(),
              [&](double, ComplexMatrix& y, const ComplexMatrix& dy) {
                y = hermitian_part(y);
                if (frobenius_norm(dy) <= target) converged = true;
                return converged;
              });
  if (!converged) throw NumericalError("relax backend stopped before convergence");

  SteadyStateResult out;
  detail::normalize_trace(rho);
  out.rho = std::move(rho);
  out.residual = frobenius_norm(rhs(out.rho));
  out.solver = Backend::relax;
  out.iterations = ode.rhs_evals();
  return out;
}

inline SteadyStateResult solve_steady_state(const LindbladModel& model, Backend backend = Backend::auto_select,
                                            const Tolerances& tol = {}) {
  if (!(model.gamma > 0.0)) {
    throw InvalidArgument("solve_steady_state: Gamma must be > 0 (at Gamma = 0 the steady state is not unique)");
  }
  if (backend == Backend::auto_select) backend = model.dim() <= tol.dense_cap ? Backend::direct : Backend::relax;
  return backend == Backend::direct ? solve_direct(model, tol) : solve_relax(model, tol);
}

/// Clip roundoff-level negative eigenvalues ([-clip, 0)) and renormalize.
/// A more negative eigenvalue means the solver failed and is an error.
inline ComplexMatrix repair_positivity(const ComplexMatrix& rho, const Tolerances& tol = {},
                                       double* min_eigenvalue = nullptr) {
  const auto eig = hermitian_eig(hermitian_part(rho), tol);
  const double lmin = eig.values.front();
  if (min_eigenvalue) *min_eigenvalue = lmin;
  if (lmin >= 0.0) return rho;
  if (lmin < -tol.positivity_clip) {
    std::ostringstream os;
    os << "density matrix has eigenvalue " << lmin << " below -" << tol.positivity_clip;
    throw NumericalError(os.str());
  }
  ComplexMatrix out = hermitian_function(
      hermitian_part(rho), [](double x) { return complex(std::max(x, 0.0)); }, tol);
  detail::normalize_trace(out);
  return out;
}

/// tr(rho X)
inline complex expectation(const ComplexMatrix& rho, const ComplexMatrix& x) {
  complex s{};
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j) s += rho(i, j) * x(j, i);
  return s;
}

inline double purity(const ComplexMatrix& rho) { return expectation(rho, rho).real(); }

/// Sum of |negative eigenvalues| of the partial transpose (Bell state: 1/2).
inline double negativity(const ComplexMatrix& rho, std::size_t dA, std::size_t dB, const Tolerances& tol = {}) {
  const auto eig = hermitian_eig(hermitian_part(partial_transpose(rho, dA, dB)), tol);
  double s = 0.0;
  for (double v : eig.values)
    if (v < 0.0) s -= v;
  return s;
}

/// <psi| rho |psi> for normalized psi.
inline double fidelity_pure(const ComplexMatrix& rho, std::span<const complex> psi) {
  const auto r = rho * psi;
  complex s{};
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i]) * r[i];
  return s.real();
}

/// The unique state annihilated by every jump operator (null vector of
/// sum_k w_k u_k† u_k). Throws if no such state exists or it is not unique.
inline ComplexVector dark_state(const LindbladModel& model, const Tolerances& tol = {}) {
  const std::size_t n = model.dim();
  ComplexMatrix q(n, n);
  double scale = 0.0;
  for (std::size_t k = 0; k < model.unit_jumps.size(); ++k) {
    const auto& u = model.unit_jumps[k];
    q.add_scaled(complex(model.jump_weights[k]), adjoint(u) * u);
  }
  const auto eig = hermitian_eig(hermitian_part(q), tol);
  for (double v : eig.values) scale = std::max(scale, std::abs(v));
  if (eig.values[0] > tol.linalg * scale) throw InvalidArgument("dark_state: the jump operators have no common dark state");
  if (n > 1 && eig.values[1] <= tol.linalg * scale) throw InvalidArgument("dark_state: the dark state is not unique");
  return column(eig.vectors, 0);
}

struct ObservablesRecord {
  double delta = 0.0;
  bool delta_defined = true;
  double purity = 0.0;
  double negativity = 0.0;
  std::optional<double> local_a;  ///< <S^z_A> for spin kinds, <n_A> for bosons
  std::optional<double> local_b;
  double occ_a = 0.0;  ///< <O_A† O_A>
  double occ_b = 0.0;  ///< <O_B† O_B>
  double min_eigenvalue = 0.0;
};

/// Delta = |occA - occB| / (occA + occB) with occX = <O_X† O_X>.
///
/// Models without a local operator (custom operator files without an O
/// block) use the first two jumps, assumed to be O ⊗ 1 and 1 ⊗ O†.
inline ObservablesRecord compute_observables(const LindbladModel& model, const ComplexMatrix& rho_in,
                                             const Tolerances& tol = {}) {
  ObservablesRecord r;
  const ComplexMatrix rho = repair_positivity(rho_in, tol, &r.min_eigenvalue);
  const std::size_t d = model.d;

  if (model.local_op.size() > 0) {
    const ComplexMatrix oo = adjoint(model.local_op) * model.local_op;
    r.occ_a = expectation(rho, on_a(oo)).real();
    r.occ_b = expectation(rho, on_b(oo)).real();
  } else if (model.unit_jumps.size() == 2) {
    const auto& ua = model.unit_jumps[0];
    const auto& ub = model.unit_jumps[1];
    r.occ_a = expectation(rho, adjoint(ua) * ua).real();
    r.occ_b = expectation(rho, ub * adjoint(ub)).real();
  } else {
    r.occ_a = r.occ_b = std::numeric_limits<double>::quiet_NaN();
  }
  const double den = r.occ_a + r.occ_b;
  if (std::isfinite(den) && den >= tol.delta_guard) {
    r.delta = std::abs(r.occ_a - r.occ_b) / den;
  } else {
    r.delta = std::numeric_limits<double>::quiet_NaN();
    r.delta_defined = false;
  }

  r.purity = purity(rho);
  r.negativity = negativity(rho, d, d, tol);
  if (model.local_z) {
    r.local_a = expectation(rho, on_a(*model.local_z)).real();
    r.local_b = expectation(rho, on_b(*model.local_z)).real();
  }
  return r;
}

}  // namespace ptsym
