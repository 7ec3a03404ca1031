#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/io.hpp"
#include "ptsym/models.hpp"
#include "ptsym/random_ensemble.hpp"
#include "ptsym/steadystate.hpp"

namespace ptsym {

struct SweepRecord {
  ModelKind kind = ModelKind::custom;
  std::size_t d = 0;
  double spin = 0.0;
  double g = 1.0;
  double gamma_over_g = 0.0;
  ObservablesRecord obs;
  double residual = 0.0;
  Backend solver = Backend::direct;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
};

/// "a,b,c" or "logspace:min,max,points".
inline std::vector<double> parse_grid(const std::string& spec) {
  auto parse_list = [](const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw InvalidArgument("grid: cannot parse '" + tok + "'");
      }
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw InvalidArgument("grid: bad value '" + tok + "'");
      v.push_back(x);
    }
    return v;
  };
  std::vector<double> grid;
  const std::string prefix = "logspace:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto p = parse_list(spec.substr(prefix.size()));
    if (p.size() != 3 || !(p[0] > 0.0) || !(p[1] > 0.0)) {
      throw InvalidArgument("grid: logspace needs min,max,points with min, max > 0");
    }
    const double count = std::round(p[2]);
    if (count < 1 || std::abs(count - p[2]) > 1e-12) throw InvalidArgument("grid: logspace points must be a positive integer");
    const auto m = static_cast<std::size_t>(count);
    const double a = std::log10(p[0]), b = std::log10(p[1]);
    for (std::size_t k = 0; k < m; ++k) {
      grid.push_back(m == 1 ? p[0] : std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(m - 1)));
    }
    if (m > 1) {
      grid.front() = p[0];
      grid.back() = p[1];
    }
  } else {
    grid = parse_list(spec);
  }
  if (grid.empty()) throw InvalidArgument("grid: no points");
  for (double x : grid)
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("grid: Gamma/g values must be finite and > 0");
  return grid;
}

inline SweepRecord solve_point(const LindbladModel& base, double gamma_over_g, Backend backend,
                               const Tolerances& tol = {}) {
  const auto start = std::chrono::steady_clock::now();
  const LindbladModel m = with_rates(base, base.g, gamma_over_g * base.g);
  const auto ss = solve_steady_state(m, backend, tol);
  SweepRecord r;
  r.kind = m.kind;
  r.d = m.d;
  r.spin = m.spin;
  r.g = m.g;
  r.gamma_over_g = gamma_over_g;
  r.obs = compute_observables(m, ss.rho, tol);
  r.residual = ss.residual;
  r.solver = ss.solver;
  r.iterations = ss.iterations;
  r.seed = m.params.seed;
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Solve every grid point; with jobs > 1 points run on worker threads.
/// Output order always follows the grid.
inline std::vector<SweepRecord> run_sweep(const LindbladModel& base, const std::vector<double>& grid,
                                          Backend backend = Backend::auto_select, const Tolerances& tol = {},
                                          unsigned jobs = 1) {
  std::vector<SweepRecord> out(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < grid.size();) {
      try {
        out[k] = solve_point(base, grid[k], backend, tol);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(grid.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct EnsembleInstance {
  RandomJumpInstance jump;
  std::vector<SweepRecord> records;
};

/// Random-operator ensemble; instance k uses seed seed_base + k.
inline std::vector<EnsembleInstance> ensemble_sweep(std::size_t d, std::size_t instances, std::uint64_t seed_base,
                                                    const std::vector<double>& grid,
                                                    Backend backend = Backend::auto_select,
                                                    const Tolerances& tol = {}, unsigned jobs = 1) {
  if (instances < 1) throw InvalidArgument("ensemble_sweep: need at least one instance");
  std::vector<EnsembleInstance> out;
  for (std::size_t k = 0; k < instances; ++k) {
    EnsembleInstance e;
    e.jump = sample_random_jump(d, seed_base + k, tol);
    try {
      e.records = run_sweep(random_model(e.jump, 1.0, 1.0), grid, backend, tol, jobs);
    } catch (const NumericalError& err) {
      throw NumericalError("random instance with seed " + std::to_string(e.jump.seed) + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// Names of the per-subsystem local observable columns, or empty.
inline std::pair<std::string, std::string> local_column_names(ModelKind k) {
  if (is_spin_kind(k)) return {"szA", "szB"};
  if (k == ModelKind::boson) return {"nA", "nB"};
  return {"", ""};
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records, bool include_timing = true) {
  const ModelKind kind = records.empty() ? ModelKind::custom : records.front().kind;
  const auto [la, lb] = local_column_names(kind);
  os << "modelKind,d,S,g,gammaOverG,delta,purity,negativity";
  if (!la.empty()) os << ',' << la << ',' << lb;
  os << ",occA,occB,residual,solver,iterations,seed";
  if (include_timing) os << ",wallTimeMs";
  os << '\n';
  for (const auto& r : records) {
    os << to_string(r.kind) << ',' << r.d << ',' << format_double(r.spin) << ',' << format_double(r.g) << ','
       << format_double(r.gamma_over_g) << ',' << format_double(r.obs.delta) << ',' << format_double(r.obs.purity)
       << ',' << format_double(r.obs.negativity);
    if (!la.empty()) {
      os << ',' << format_double(r.obs.local_a.value_or(NAN)) << ',' << format_double(r.obs.local_b.value_or(NAN));
    }
    os << ',' << format_double(r.obs.occ_a) << ',' << format_double(r.obs.occ_b) << ','
       << format_double(r.residual) << ',' << to_string(r.solver) << ',' << r.iterations << ',' << r.seed;
    if (include_timing) os << ',' << format_double(r.wall_time_ms);
    os << '\n';
  }
}

}  // namespace ptsym
