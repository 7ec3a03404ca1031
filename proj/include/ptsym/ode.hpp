#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/matrix.hpp"

namespace ptsym {

struct OdeOptions {
  double atol = 1e-10;
  double rtol = 1e-8;
  std::size_t max_rhs_evals = 10'000'000;
  double max_step = std::numeric_limits<double>::infinity();
};

/// Dormand-Prince 5(4) with FSAL and a standard step-size controller.
///
/// The state is a dense complex matrix; the error norm is the max over
/// entries of |err| / (atol + rtol * max(|y|, |y_new|)).
class DormandPrince {
public:
  using Rhs = std::function<ComplexMatrix(const ComplexMatrix&)>;
  /// Called after every accepted step with (t, y, dy/dt at y). Returning
  /// true stops the integration. The callback may modify y in place.
  using StepCallback = std::function<bool(double, ComplexMatrix&, const ComplexMatrix&)>;

  DormandPrince(Rhs f, OdeOptions opts = {}) : f_(std::move(f)), opts_(opts) {}

  std::size_t rhs_evals() const noexcept { return evals_; }
  std::size_t accepted_steps() const noexcept { return accepted_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }
  double step_size() const noexcept { return h_; }

  /// Advance (t, y) to t_end, or until the callback asks to stop. Returns
  /// true if t_end was reached.
  bool advance(double& t, ComplexMatrix& y, double t_end, const StepCallback& cb = {}) {
    if (!(t_end >= t)) throw InvalidArgument("DormandPrince: t_end precedes t");
    if (t_end == t) return true;
    if (!have_k1_) {
      k_[0] = eval(y);
      have_k1_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(y, k_[0], t_end - t);

    while (t < t_end) {
      double h = std::min({h_, t_end - t, opts_.max_step});
      const bool last = (h == t_end - t);
      const double h_floor = 1e-14 * std::max(1.0, std::abs(t));
      if (h < h_floor && !last) {
        std::ostringstream os;
        os << "DormandPrince: step size underflow at t = " << t << " (h = " << h << ")";
        throw NumericalError(os.str());
      }

      ComplexMatrix y5 = y;
      ComplexMatrix err(y.rows(), y.cols());
      stage_update(y, h, y5, err);

      const double en = error_norm(y, y5, err);
      if (en <= 1.0) {
        t = last ? t_end : t + h;
        y = std::move(y5);
        k_[0] = std::move(k_[6]);
        ++accepted_;
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (!last || fac < 1.0) h_ = h * fac;
        if (cb && cb(t, y, k_[0])) return t >= t_end;
      } else {
        ++rejected_;
        h_ = h * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
      }
    }
    return true;
  }

  /// Forget the cached derivative (call after modifying y outside advance()).
  void reset_derivative() noexcept { have_k1_ = false; }

private:
  ComplexMatrix eval(const ComplexMatrix& y) {
    if (++evals_ > opts_.max_rhs_evals) {
      std::ostringstream os;
      os << "DormandPrince: right-hand-side budget of " << opts_.max_rhs_evals << " evaluations exhausted";
      throw NumericalError(os.str());
    }
    return f_(y);
  }

  // Butcher tableau; k_[0] holds f(y) on entry, k_[6] holds f(y5) on exit.
  void stage_update(const ComplexMatrix& y, double h, ComplexMatrix& y5, ComplexMatrix& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr std::array<double, 7> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                              11.0 / 84, 0.0};
    static constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                              -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    auto combo = [&](std::initializer_list<std::pair<double, int>> terms) {
      ComplexMatrix s = y;
      for (const auto& [c, k] : terms) s.add_scaled(complex(h * c), k_[static_cast<std::size_t>(k)]);
      return s;
    };
    k_[1] = eval(combo({{a21, 0}}));
    k_[2] = eval(combo({{a31, 0}, {a32, 1}}));
    k_[3] = eval(combo({{a41, 0}, {a42, 1}, {a43, 2}}));
    k_[4] = eval(combo({{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}}));
    k_[5] = eval(combo({{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}}));
    y5 = y;
    for (int k = 0; k < 6; ++k) y5.add_scaled(complex(h * b5[static_cast<std::size_t>(k)]), k_[static_cast<std::size_t>(k)]);
    k_[6] = eval(y5);
    for (std::size_t k = 0; k < 7; ++k) {
      const double c = b5[k] - b4[k];
      if (c != 0.0) err.add_scaled(complex(h * c), k_[k]);
    }
  }

  double error_norm(const ComplexMatrix& y, const ComplexMatrix& y5, const ComplexMatrix& err) const {
    double m = 0.0;
    const auto yv = y.values(), y5v = y5.values(), ev = err.values();
    for (std::size_t i = 0; i < ev.size(); ++i) {
      const double sc = opts_.atol + opts_.rtol * std::max(std::abs(yv[i]), std::abs(y5v[i]));
      m = std::max(m, std::abs(ev[i]) / sc);
    }
    return m;
  }

  double initial_step(const ComplexMatrix& y, const ComplexMatrix& f0, double span) const {
    double d0 = 0.0, d1 = 0.0;
    const auto yv = y.values(), fv = f0.values();
    for (std::size_t i = 0; i < yv.size(); ++i) {
      const double sc = opts_.atol + opts_.rtol * std::abs(yv[i]);
      d0 = std::max(d0, std::abs(yv[i]) / sc);
      d1 = std::max(d1, std::abs(fv[i]) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  Rhs f_;
  OdeOptions opts_;
  std::array<ComplexMatrix, 7> k_;
  bool have_k1_ = false;
  double h_ = 0.0;
  std::size_t evals_ = 0, accepted_ = 0, rejected_ = 0;
};

}  // namespace ptsym
