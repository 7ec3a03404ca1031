#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ptsym/ptsym.hpp"

namespace ptsym::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

struct ModelOptions {
  std::string model = "spin";
  std::optional<double> spin;
  std::optional<int> d;
  double p = 1.0;
  std::uint64_t seed = 0;
  double gamma_b_scale = 1.0;
  double rate_factor = kAmplitudeRateFactor;
  std::string operators;
};

inline void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--model", m.model,
                   "spin | boson | multijump | generalized | appendix-a | random | custom")
      ->capture_default_str();
  app->add_option("--S", m.spin, "spin quantum number (half-integer) for spin-type models");
  app->add_option("--d", m.d, "local dimension (boson cutoff, random-operator dimension)");
  app->add_option("--p", m.p, "multijump temperature parameter in [0, 1]")->capture_default_str();
  app->add_option("--seed", m.seed, "seed of the random jump operator")->capture_default_str();
  app->add_option("--gamma-b-scale", m.gamma_b_scale, "ratio Gamma_B / Gamma_A (1 keeps the balance)")
      ->capture_default_str();
  app->add_option("--rate-factor", m.rate_factor,
                  "jump operators are sqrt(rate_factor * Gamma) * O; 2 damps <O> at rate Gamma")
      ->capture_default_str();
  app->add_option("--operators", m.operators, "operator file defining a custom model");
}

inline void add_tolerance_options(CLI::App* app, Tolerances& t) {
  app->add_option("--tol-linalg", t.linalg)->capture_default_str();
  app->add_option("--tol-jacobi", t.jacobi_offdiag)->capture_default_str();
  app->add_option("--tol-qr-deflation", t.qr_deflation)->capture_default_str();
  app->add_option("--tol-qr-sweeps-per-n", t.qr_sweeps_per_n)->capture_default_str();
  app->add_option("--tol-physics", t.physics)->capture_default_str();
  app->add_option("--tol-pt", t.pt_relative)->capture_default_str();
  app->add_option("--tol-degeneracy", t.degeneracy)->capture_default_str();
  app->add_option("--tol-positivity", t.positivity_clip)->capture_default_str();
  app->add_option("--tol-delta-guard", t.delta_guard)->capture_default_str();
  app->add_option("--tol-relax", t.relax_rtol)->capture_default_str();
  app->add_option("--tol-ode-atol", t.ode_atol)->capture_default_str();
  app->add_option("--tol-ode-rtol", t.ode_rtol)->capture_default_str();
  app->add_option("--rhs-budget", t.rhs_budget)->capture_default_str();
  app->add_option("--dense-cap", t.dense_cap, "largest Hilbert dimension for dense superoperators")
      ->capture_default_str();
}

/// Build the model at g = 1 and the given Gamma/g.
inline LindbladModel make_model(const ModelOptions& o, double gamma_over_g, const Tolerances& tol) {
  ModelParams params;
  params.p = o.p;
  params.seed = o.seed;
  params.gamma_b_scale = o.gamma_b_scale;
  params.rate_factor = o.rate_factor;
  if (!o.operators.empty() || o.model == "custom") {
    if (o.operators.empty()) throw InvalidArgument("--model custom needs --operators <path>");
    return model_from_operator_file(read_operator_file(o.operators), 1.0, gamma_over_g, params);
  }
  const ModelKind kind = parse_model_kind(o.model);
  if (kind == ModelKind::random) {
    if (!o.d) throw InvalidArgument("--model random needs --d");
    if (o.gamma_b_scale != 1.0) throw InvalidArgument("--gamma-b-scale is not supported for random models");
    return random_model(sample_random_jump(static_cast<std::size_t>(*o.d), o.seed, tol), 1.0, gamma_over_g, params);
  }
  if (kind == ModelKind::boson) {
    if (!o.d) throw InvalidArgument("--model boson needs --d");
    return build_model(kind, static_cast<double>(*o.d), 1.0, gamma_over_g, params, tol);
  }
  if (!o.spin) throw InvalidArgument("--model " + o.model + " needs --S");
  return build_model(kind, *o.spin, 1.0, gamma_over_g, params, tol);
}

/// Output stream for a path, "-" meaning the given fallback stream.
class Output {
public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InvalidArgument("cannot open output file '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

inline nlohmann::json json_number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

inline nlohmann::json to_json(const SweepRecord& r, bool timing) {
  nlohmann::json j;
  j["modelKind"] = std::string(to_string(r.kind));
  j["d"] = r.d;
  j["S"] = r.spin;
  j["g"] = r.g;
  j["gammaOverG"] = r.gamma_over_g;
  j["delta"] = json_number(r.obs.delta);
  j["purity"] = r.obs.purity;
  j["negativity"] = r.obs.negativity;
  const auto [la, lb] = local_column_names(r.kind);
  if (!la.empty()) {
    j[la] = json_number(r.obs.local_a.value_or(NAN));
    j[lb] = json_number(r.obs.local_b.value_or(NAN));
  }
  j["occA"] = json_number(r.obs.occ_a);
  j["occB"] = json_number(r.obs.occ_b);
  j["residual"] = r.residual;
  j["solver"] = std::string(to_string(r.solver));
  j["iterations"] = r.iterations;
  j["seed"] = r.seed;
  if (timing) j["wallTimeMs"] = r.wall_time_ms;
  return j;
}

inline void write_records(std::ostream& os, const std::vector<SweepRecord>& records, const std::string& format,
                          bool timing) {
  if (format == "csv") {
    write_sweep_csv(os, records, timing);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(to_json(r, timing));
    os << arr.dump(2) << '\n';
  }
}

inline std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    s += format_double(v);
    first = false;
  }
  return s + '\n';
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PT-symmetric Lindblad models: steady states, spectra, dynamics"};
  app.require_subcommand(1);

  ModelOptions mo;
  Tolerances tol;
  std::string grid_spec, out_path, solver = "auto", format = "csv";
  double gamma_over_g = 1.0, t_max = 20.0, dt_out = 0.05;
  unsigned jobs = 1;
  bool no_timing = false, generalized_map = false, skip_unstable = false;
  std::string eig_backend = "qr";
  std::size_t instances = 1;
  std::optional<int> ens_d;
  std::uint64_t ens_seed = 0;

  auto* sweep = app.add_subcommand("sweep", "steady-state observables over a Gamma/g grid");
  add_model_options(sweep, mo);
  sweep->add_option("--gamma-over-g", grid_spec, "comma list or logspace:min,max,points")->required();
  sweep->add_option("--solver", solver, "direct | relax | auto")->capture_default_str();
  sweep->add_option("--out", out_path, "output path ('-' for stdout)")->required();
  sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sweep->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  sweep->add_flag("--no-timing", no_timing, "omit the wallTimeMs column");
  add_tolerance_options(sweep, tol);

  auto* spectrum = app.add_subcommand("spectrum", "full Liouvillian spectrum");
  add_model_options(spectrum, mo);
  spectrum->add_option("--gamma-over-g", gamma_over_g)->required();
  spectrum->add_option("--out", out_path)->required();
  spectrum->add_option("--eig-backend", eig_backend, "qr (in-house) | reference (Eigen)")
      ->check(CLI::IsMember({"qr", "reference"}))
      ->capture_default_str();
  add_tolerance_options(spectrum, tol);

  auto* evolve_cmd = app.add_subcommand("evolve", "time evolution from the swapped dark state");
  add_model_options(evolve_cmd, mo);
  evolve_cmd->add_option("--gamma-over-g", gamma_over_g)->required();
  evolve_cmd->add_option("--t-max", t_max, "final time in units of 1/g")->capture_default_str();
  evolve_cmd->add_option("--dt-out", dt_out, "sampling interval in units of 1/g")->capture_default_str();
  evolve_cmd->add_option("--out", out_path)->required();
  add_tolerance_options(evolve_cmd, tol);

  auto* ensemble = app.add_subcommand("random-ensemble", "sweeps over random jump operators");
  ensemble->add_option("--d", ens_d)->required();
  ensemble->add_option("--instances", instances)->required();
  ensemble->add_option("--seed", ens_seed, "seed of instance 0; instance k uses seed + k")->required();
  ensemble->add_option("--gamma-over-g", grid_spec)->required();
  ensemble->add_option("--solver", solver)->capture_default_str();
  ensemble->add_option("--out", out_path, "output directory")->required();
  ensemble->add_option("--jobs", jobs)->capture_default_str();
  ensemble->add_flag("--no-timing", no_timing);
  add_tolerance_options(ensemble, tol);

  auto* hp = app.add_subcommand("hp", "large-S closed forms");
  hp->add_option("--gamma-over-g", grid_spec)->required();
  hp->add_option("--out", out_path)->capture_default_str();
  hp->add_flag("--skip-unstable", skip_unstable, "drop grid points with Gamma/g <= 1 instead of failing");

  auto* check = app.add_subcommand("check-pt", "PT-symmetry criterion and mixedness obstruction");
  add_model_options(check, mo);
  check->add_option("--gamma-over-g", gamma_over_g)->capture_default_str();
  check->add_flag("--generalized-map", generalized_map, "use the map with the extra unitary (generalized model)");
  add_tolerance_options(check, tol);

  auto* xport = app.add_subcommand("export-operators", "write the model operators to an operator file");
  add_model_options(xport, mo);
  xport->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sweep) {
      const auto grid = parse_grid(grid_spec);
      const auto base = make_model(mo, 1.0, tol);
      const auto records = run_sweep(base, grid, parse_backend(solver), tol, jobs);
      Output o(out_path, out);
      write_records(*o, records, format, !no_timing);
    } else if (*spectrum) {
      const auto model = make_model(mo, gamma_over_g, tol);
      const auto spec = liouvillian_spectrum(
          model, eig_backend == "qr" ? EigenBackend::qr : EigenBackend::reference, tol);
      Output o(out_path, out);
      *o << "re,im\n";
      for (const auto& z : spec.eigenvalues) *o << csv_row({z.real(), z.imag()});
      err << "eigenvalues: " << spec.eigenvalues.size() << ", gap: " << format_double(spec.gap)
          << ", ||L||_F: " << format_double(spec.norm) << '\n';
    } else if (*evolve_cmd) {
      const auto model = make_model(mo, gamma_over_g, tol);
      const ComplexMatrix rho0 = swapped_dark_state(model, tol);
      const auto traj = evolve(model, rho0, t_max, dt_out, tol);
      const auto [la, lb] = local_column_names(model.kind);
      Output o(out_path, out);
      *o << "t," << la << ',' << lb << ",traceError,hermiticityError,purity\n";
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        *o << csv_row({traj.times[k], traj.sz_a[k], traj.sz_b[k], traj.trace_error[k], traj.hermiticity_error[k],
                       traj.purity[k]});
      }
      if (model.gamma > 0.0) {
        const double inf = stationary_sz_a(model, traj, tol);
        err << "classification: " << to_string(classify_dynamics(traj, inf)) << " (stationary " << la << " = "
            << format_double(inf) << ")\n";
      }
    } else if (*ensemble) {
      const auto grid = parse_grid(grid_spec);
      if (*ens_d < 2) throw InvalidArgument("--d must be >= 2");
      const auto result = ensemble_sweep(static_cast<std::size_t>(*ens_d), instances, ens_seed, grid,
                                         parse_backend(solver), tol, jobs);
      namespace fs = std::filesystem;
      fs::create_directories(out_path);
      nlohmann::json manifest;
      manifest["d"] = *ens_d;
      manifest["instances"] = instances;
      manifest["seedBase"] = ens_seed;
      manifest["gammaOverG"] = grid;
      manifest["rateFactor"] = kAmplitudeRateFactor;
      manifest["entries"] = nlohmann::json::array();
      for (std::size_t k = 0; k < result.size(); ++k) {
        const auto& e = result[k];
        const std::string csv = "instance_" + std::to_string(k) + ".csv";
        const std::string ops = "instance_" + std::to_string(k) + ".ops";
        {
          std::ofstream f(fs::path(out_path) / csv, std::ios::binary);
          write_sweep_csv(f, e.records, !no_timing);
        }
        const auto model = random_model(e.jump, 1.0, 1.0);
        write_operator_file((fs::path(out_path) / ops).string(), to_operator_file(model));
        const ComplexMatrix rec = e.jump.o * adjoint(e.jump.o);
        ComplexMatrix rprime = ComplexMatrix::diagonal(std::vector<complex>(e.jump.eigenvalues.begin(), e.jump.eigenvalues.end()));
        rprime = e.jump.u * rprime * adjoint(e.jump.u);
        const auto pt = pt_symmetry_check(model, tol);
        nlohmann::json entry;
        entry["index"] = k;
        entry["requestedSeed"] = e.jump.requested_seed;
        entry["seed"] = e.jump.seed;
        entry["resamples"] = e.jump.resamples;
        entry["csv"] = csv;
        entry["operators"] = ops;
        entry["eigenvaluesRPrime"] = e.jump.eigenvalues;
        entry["singularValues"] = e.jump.singular_values;
        entry["reconstructionError"] = max_abs_diff(rec, rprime);
        entry["traceO"] = std::abs(trace(e.jump.o));
        entry["ptResidualRelative"] = pt.residual / pt.norm;
        manifest["entries"].push_back(entry);
      }
      std::ofstream mf(fs::path(out_path) / "manifest.json", std::ios::binary);
      mf << manifest.dump(2) << '\n';
    } else if (*hp) {
      const auto grid = parse_grid(grid_spec);
      Output o(out_path, out);
      *o << "gammaOverG,purity,negativity,szDeviation,deltaInfinity\n";
      for (double x : grid) {
        if (x <= 1.0 && skip_unstable) continue;
        const auto r = hp_curves(1.0, x);
        *o << csv_row({x, r.purity, r.negativity, r.sz_deviation, r.delta_infinity});
      }
    } else if (*check) {
      const auto model = make_model(mo, gamma_over_g, tol);
      PTMapSpec map = model.pt;
      if (generalized_map && !model.pt.extra_unitary) {
        throw InvalidArgument("--generalized-map needs a model with an extra unitary (--model generalized)");
      }
      if (!generalized_map) map.extra_unitary.reset();
      const auto rep = pt_symmetry_check(model, map, tol);
      out << "model: " << to_string(model.kind) << '\n';
      out << "map: " << (map.extra_unitary ? "generalized" : "plain") << '\n';
      out << "pt_residual: " << format_double(rep.residual) << '\n';
      out << "liouvillian_norm: " << format_double(rep.norm) << '\n';
      out << "relative_residual: " << format_double(rep.norm > 0 ? rep.residual / rep.norm : 0.0) << '\n';
      out << "symmetric: " << (rep.symmetric ? "true" : "false") << '\n';
      try {
        const auto ob = mixedness_obstruction(model, map, tol);
        out << "mixedness_obstruction: " << format_double(ob.value) << '\n';
        out << "population_drift: " << format_double(ob.population_drift) << '\n';
        out << "degeneracy_tolerance: " << format_double(ob.degeneracy_tolerance) << '\n';
      } catch (const InvalidArgument& e) {
        out << "mixedness_obstruction: n/a (" << e.what() << ")\n";
      }
      if (!rep.symmetric) return kNumerical;
    } else if (*xport) {
      const auto model = make_model(mo, 1.0, tol);
      Output o(out_path, out);
      write_operator_file(*o, to_operator_file(model));
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ptsym");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ptsym::cli
