// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ptsym/ptsym.hpp"

using namespace ptsym;

namespace {

const Tolerances kTol{};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated] ";
    }
    detail << what << "; ";
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Case {
  std::string label;
  ModelKind kind;
  double size;
};

const std::vector<Case> kBaseModels = {
    {"spin S=1/2", ModelKind::spin, 0.5}, {"spin S=1", ModelKind::spin, 1.0}, {"spin S=2", ModelKind::spin, 2.0},
    {"boson d=3", ModelKind::boson, 3.0}, {"boson d=5", ModelKind::boson, 5.0},
};

LindbladModel make(ModelKind kind, double size, double gamma_over_g, ModelParams params = {}) {
  return build_model(kind, size, 1.0, gamma_over_g, params, kTol);
}

// Solves are cached because several criteria revisit the same large points.
std::map<std::tuple<int, double, double, double>, ComplexMatrix> g_cache;

const ComplexMatrix& steady(ModelKind kind, double size, double x, ModelParams params = {}) {
  const auto key = std::make_tuple(static_cast<int>(kind), size, x, params.p);
  auto it = g_cache.find(key);
  if (it == g_cache.end()) {
    it = g_cache.emplace(key, solve_steady_state(make(kind, size, x, params), Backend::auto_select, kTol).rho).first;
  }
  return it->second;
}

ObservablesRecord observe(ModelKind kind, double size, double x, ModelParams params = {}) {
  return compute_observables(make(kind, size, x, params), steady(kind, size, x, params), kTol);
}

void check_mixed_limit(Outcome& o, const std::string& label, const LindbladModel& m, const ComplexMatrix& rho) {
  const double n = static_cast<double>(m.dim());
  const double p = compute_observables(m, rho, kTol).purity;
  const double rel = std::abs(p - 1.0 / n) * n;
  o.require(rel <= 0.05, label + " |P-1/n|n=" + num(rel));
}

void check_dark_limit(Outcome& o, const std::string& label, const LindbladModel& m, const ComplexMatrix& rho) {
  const auto obs = compute_observables(m, rho, kTol);
  const ComplexVector dark = dark_state(m, kTol);
  const double f = fidelity_pure(rho, dark);
  o.require(obs.delta_defined && obs.delta >= 0.99 && obs.purity >= 0.99 && f >= 0.99,
            label + " D=" + num(obs.delta) + " P=" + num(obs.purity) + " F=" + num(f));
}

Outcome criterion1() {
  Outcome o;
  for (const auto& c : kBaseModels) {
    const auto m = make(c.kind, c.size, 0.01);
    check_mixed_limit(o, c.label, m, steady(c.kind, c.size, 0.01));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const auto& c : kBaseModels) {
    const auto m = make(c.kind, c.size, 100.0);
    check_dark_limit(o, c.label, m, steady(c.kind, c.size, 100.0));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<std::pair<std::string, LindbladModel>> models;
  for (double s : {0.5, 1.0, 1.5, 2.0}) models.emplace_back("spin S=" + num(s), make(ModelKind::spin, s, 1.0));
  for (int d = 2; d <= 5; ++d) models.emplace_back("boson d=" + std::to_string(d), make(ModelKind::boson, d, 1.0));
  ModelParams mj;
  mj.p = 0.8;
  for (double s : {0.5, 1.0, 2.0}) models.emplace_back("multijump S=" + num(s), make(ModelKind::multijump, s, 1.0, mj));
  for (double s : {0.5, 1.0, 2.0})
    models.emplace_back("generalized S=" + num(s), make(ModelKind::generalized, s, 1.0));
  for (const auto& [label, m] : models) {
    const auto ob = mixedness_obstruction(m, kTol);
    o.require(ob.population_drift <= 1e-12 * m.gamma, label + " drift=" + num(ob.population_drift));
  }
  for (double s : {0.5, 1.0, 2.0}) {
    const auto m = make(ModelKind::appendix_a, s, 1.0);
    const auto ob = mixedness_obstruction(m, kTol);
    o.require(ob.value > 1e-3 * m.gamma, "appendix-a S=" + num(s) + " obstruction=" + num(ob.value));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::vector<std::pair<std::string, LindbladModel>> models;
  for (double x : {0.5, 2.0}) {
    for (double s : {0.5, 1.0, 2.0}) {
      models.emplace_back("spin S=" + num(s), make(ModelKind::spin, s, x));
      models.emplace_back("generalized S=" + num(s), make(ModelKind::generalized, s, x));
      models.emplace_back("appendix-a S=" + num(s), make(ModelKind::appendix_a, s, x));
      ModelParams mj;
      mj.p = 0.8;
      models.emplace_back("multijump S=" + num(s), make(ModelKind::multijump, s, x, mj));
    }
    for (int d : {3, 5}) models.emplace_back("boson d=" + std::to_string(d), make(ModelKind::boson, d, x));
    for (std::uint64_t seed : {1u, 2u, 3u})
      models.emplace_back("random d=4 seed=" + std::to_string(seed),
                          random_model(sample_random_jump(4, seed, kTol), 1.0, x));
  }
  double worst = 0.0;
  for (const auto& [label, m] : models) {
    const auto r = pt_symmetry_check(m, kTol);
    const double rel = r.residual / r.norm;
    worst = std::max(worst, rel);
    if (rel > 1e-10) o.require(false, label + " rel=" + num(rel));
  }
  o.require(worst <= 1e-10, std::to_string(models.size()) + " catalog models, worst rel residual=" + num(worst));
  ModelParams unbalanced;
  unbalanced.gamma_b_scale = 2.0;
  const auto ctrl = pt_symmetry_check(make(ModelKind::spin, 1.0, 1.0, unbalanced), kTol);
  o.require(ctrl.residual > 1e-3 * ctrl.norm, "unbalanced control rel=" + num(ctrl.residual / ctrl.norm));
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (double x : {1.5, 2.0, 5.0, 10.0}) {
    const auto hp = hp_curves(1.0, x);
    const auto gm = gaussian_oracle(1.0, x);
    worst = std::max({worst, std::abs(gm.purity - hp.purity), std::abs(gm.negativity - hp.negativity),
                      std::abs(gm.delta - hp.delta_infinity), std::abs(gm.n_a - hp.sz_deviation)});
  }
  o.require(worst <= 1e-8, "oracle vs closed forms max diff=" + num(worst));
  double prev = INFINITY;
  std::string seq;
  bool monotone = true;
  for (double s : {1.0, 2.0, 3.0, 4.0}) {
    const double p = observe(ModelKind::spin, s, 2.0).purity;
    const double dist = std::abs(p - 0.75);
    monotone &= dist < prev;
    prev = dist;
    seq += num(p) + " ";
  }
  o.require(monotone, "P(S=1..4, G/g=2)= " + seq);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const std::vector<double> spins = {0.5, 1.0, 2.0, 4.0};
  for (double x : {0.5, 2.0}) {
    std::vector<double> d;
    for (double s : spins) d.push_back(observe(ModelKind::spin, s, x).delta);
    bool ok = true;
    for (std::size_t k = 1; k < d.size(); ++k) ok &= x < 1.0 ? d[k] < d[k - 1] : d[k] > d[k - 1];
    std::string seq;
    for (double v : d) seq += num(v) + " ";
    o.require(ok, std::string(x < 1.0 ? "decreasing" : "increasing") + " at G/g=" + num(x) + ": " + seq);
  }
  return o;
}

double argmax_negativity(const LindbladModel& base, const std::vector<double>& grid) {
  const auto recs = run_sweep(base, grid, Backend::auto_select, kTol, 1);
  std::size_t best = 0;
  for (std::size_t k = 1; k < recs.size(); ++k)
    if (recs[k].obs.negativity > recs[best].obs.negativity) best = k;
  return grid[best];
}

Outcome criterion7() {
  Outcome o;
  const auto grid = parse_grid("logspace:0.01,100,25");
  const double spin = argmax_negativity(make(ModelKind::spin, 2.0, 1.0), grid);
  o.require(spin >= 0.7 && spin <= 1.4, "spin S=2 argmax=" + num(spin));
  ModelParams mj;
  mj.p = 0.8;
  const double multi = argmax_negativity(make(ModelKind::multijump, 2.0, 1.0, mj), grid);
  o.require(multi >= 1.0 && multi <= 1.6, "multijump S=2 p=0.8 argmax=" + num(multi));
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = sample_random_jump(8, seed, kTol);
    const std::string label = "seed " + std::to_string(inst.seed);
    const ComplexMatrix rprime = inst.u * ComplexMatrix::diagonal(std::vector<complex>(inst.eigenvalues.begin(), inst.eigenvalues.end())) *
                                 adjoint(inst.u);
    const double rec = max_abs_diff(inst.o * adjoint(inst.o), rprime);
    const double tr = std::abs(trace(inst.o));
    const double smax = inst.singular_values.back();
    std::size_t zeros = 0;
    for (double s : inst.singular_values) zeros += s <= 1e-10 * smax;
    o.require(rec <= 1e-10 && tr <= 1e-10 && zeros == 1,
              label + " rec=" + num(rec) + " tr=" + num(tr) + " zeros=" + std::to_string(zeros));
    for (double x : {0.01, 100.0}) {
      const auto m = random_model(inst, 1.0, x);
      const auto pt = pt_symmetry_check(m, kTol);
      if (pt.residual > 1e-10 * pt.norm) o.require(false, label + " PT rel=" + num(pt.residual / pt.norm));
      const ComplexMatrix rho = solve_steady_state(m, Backend::auto_select, kTol).rho;
      if (x < 1.0)
        check_mixed_limit(o, label, m, rho);
      else
        check_dark_limit(o, label, m, rho);
    }
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    for (double x : {0.5, 1.5}) {
      const auto m = make(ModelKind::spin, s, x);
      const auto spec = liouvillian_spectrum(m, EigenBackend::qr, kTol);
      const double nrm = spec.norm;
      std::size_t zeros = 0;
      double max_re = -INFINITY, closure = 0.0;
      complex sum{};
      for (const auto& z : spec.eigenvalues) {
        zeros += std::abs(z) <= 1e-8 * nrm;
        max_re = std::max(max_re, z.real());
        sum += z;
        double best = INFINITY;
        for (const auto& w : spec.eigenvalues) best = std::min(best, std::abs(w - std::conj(z)));
        closure = std::max(closure, best);
      }
      const double tr_rel = std::abs(sum - spec.trace) / std::abs(spec.trace);
      o.require(zeros == 1 && max_re <= 1e-9 * nrm && closure <= 1e-8 * nrm && tr_rel <= 1e-8,
                "S=" + num(s) + " G/g=" + num(x) + " zeros=" + std::to_string(zeros) + " maxRe/|L|=" +
                    num(max_re / nrm) + " closure=" + num(closure) + " trace rel=" + num(tr_rel));
    }
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  for (double x : {0.5, 1.5}) {
    const auto m = make(ModelKind::spin, 4.0, x);
    const auto traj = evolve(m, swapped_dark_state(m, kTol), 20.0, 0.05, kTol);
    const double inf = expectation(steady(ModelKind::spin, 4.0, x), on_a(*m.local_z)).real();
    const auto cls = classify_dynamics(traj, inf);
    const double drift = *std::max_element(traj.trace_error.begin(), traj.trace_error.end());
    const auto expected = x < 1.0 ? DynamicsClass::oscillatory : DynamicsClass::overdamped;
    o.require(cls == expected && drift <= 1e-8,
              "G/g=" + num(x) + " " + std::string(to_string(cls)) + " trace drift=" + num(drift));
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  const auto grid = parse_grid("logspace:0.01,100,25");
  for (double s : {1.0, 2.0}) {
    const auto base = make(ModelKind::generalized, s, 1.0);
    const auto recs = run_sweep(base, grid, Backend::auto_select, kTol, 1);
    double worst = 0.0;
    for (const auto& r : recs) worst = std::max(worst, std::abs(r.obs.occ_a - r.obs.occ_b));
    const double n = static_cast<double>(base.dim());
    const double p_lo = recs.front().obs.purity, p_hi = recs.back().obs.purity;
    o.require(worst <= 1e-8, "S=" + num(s) + " max|occA-occB|=" + num(worst));
    o.require(std::abs(p_lo - 1.0 / n) * n <= 0.05 && p_hi >= 3.0 * p_lo,
              "S=" + num(s) + " P(0.01)*n=" + num(p_lo * n) + " P(100)/P(0.01)=" + num(p_hi / p_lo));
  }
  return o;
}

Outcome criterion12() {
  Outcome o;
  for (double x : {0.5, 1.0, 2.0}) {
    const auto m = make(ModelKind::spin, 2.0, x);
    const auto a = solve_direct(m, kTol);
    const auto b = solve_relax(m, kTol);
    const double diff = max_abs_diff(a.rho, b.rho);
    o.require(diff <= 1e-6, "G/g=" + num(x) + " max|direct-relax|=" + num(diff) + " (" +
                                std::to_string(b.iterations) + " rhs evals)");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2,  criterion3,  criterion4,
                                                          criterion5, criterion6,  criterion7,  criterion8,
                                                          criterion9, criterion10, criterion11, criterion12};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
      const Outcome o = criteria[k]();
      pass = o.pass;
      detail = o.detail.str();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !pass;
    std::printf("%s criterion %zu (%.1f s): %s\n", pass ? "PASS" : "FAIL", k + 1, secs, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
