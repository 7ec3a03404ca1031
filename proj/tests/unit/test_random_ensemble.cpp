#include <gtest/gtest.h>

#include <cmath>

#include "ptsym/ptsym.hpp"

using namespace ptsym;

TEST(RandomJump, StructuralProperties) {
  for (std::uint64_t seed : {1u, 2u, 77u}) {
    const auto inst = sample_random_jump(6, seed);
    EXPECT_EQ(inst.seed, seed);
    EXPECT_EQ(inst.resamples, 0u);
    EXPECT_LT(std::abs(trace(inst.o)), 1e-12);
    EXPECT_EQ(inst.eigenvalues.front(), 0.0);
    EXPECT_TRUE(std::is_sorted(inst.eigenvalues.begin(), inst.eigenvalues.end()));

    // O O† = R' = U diag(lambda) U†
    std::vector<complex> lam(inst.eigenvalues.begin(), inst.eigenvalues.end());
    const auto rprime = inst.u * ComplexMatrix::diagonal(lam) * adjoint(inst.u);
    EXPECT_LT(max_abs_diff(inst.o * adjoint(inst.o), rprime), 1e-12);

    // Exactly one zero singular value, and the rest are sqrt(lambda_k).
    const double smax = inst.singular_values.back();
    EXPECT_LT(inst.singular_values.front(), 1e-12 * smax);
    EXPECT_GT(inst.singular_values[1], 1e-6 * smax);
    for (std::size_t k = 1; k < 6; ++k) EXPECT_NEAR(inst.singular_values[k], std::sqrt(inst.eigenvalues[k]), 1e-12);
  }
}

TEST(RandomJump, GoeSampleIsSymmetricAndReproducible) {
  SeededSampler a(5), b(5);
  const auto r1 = sample_goe(5, a), r2 = sample_goe(5, b);
  EXPECT_EQ(max_abs_diff(r1, r2), 0.0);
  EXPECT_EQ(max_abs_diff(r1, transpose(r1)), 0.0);
  const auto i1 = sample_random_jump(5, 9), i2 = sample_random_jump(5, 9);
  EXPECT_EQ(max_abs_diff(i1.o, i2.o), 0.0);
  EXPECT_GT(max_abs_diff(i1.o, sample_random_jump(5, 10).o), 1e-3);
}

TEST(RandomJump, InvalidDimension) { EXPECT_THROW(sample_random_jump(1, 0), InvalidArgument); }

TEST(RandomJump, GoeLevelRepulsion) {
  // Wigner-Dyson statistics: P(s < 0.1) is about 0.8%, Poisson would give 9.5%.
  std::size_t small = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (double s : goe_normalized_spacings(12, 1000 + seed)) {
      small += s < 0.1;
      ++total;
    }
  }
  EXPECT_LT(static_cast<double>(small) / static_cast<double>(total), 0.05);
}

TEST(RandomModel, IsPTSymmetricWithUniqueSteadyState) {
  const auto inst = sample_random_jump(4, 3);
  const auto m = random_model(inst, 1.0, 1.3);
  EXPECT_EQ(m.kind, ModelKind::random);
  EXPECT_EQ(m.params.seed, inst.seed);
  const auto pt = pt_symmetry_check(m);
  EXPECT_LE(pt.residual, 1e-10 * pt.norm);
  const auto ss = solve_direct(m);
  EXPECT_LT(ss.residual, 1e-10);
  const auto dark = dark_state(m);
  for (const auto& c : m.jumps) EXPECT_LT(vector_norm(c * dark), 1e-10);
}

TEST(RandomEnsemble, SweepIsDeterministic) {
  const std::vector<double> grid = {0.5, 2.0};
  const auto a = ensemble_sweep(3, 2, 40, grid);
  const auto b = ensemble_sweep(3, 2, 40, grid, Backend::auto_select, {}, 2);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(a[k].jump.requested_seed, 40 + k);
    ASSERT_EQ(a[k].records.size(), 2u);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(a[k].records[j].obs.purity, b[k].records[j].obs.purity);
      EXPECT_EQ(a[k].records[j].seed, a[k].jump.seed);
    }
  }
}

TEST(RandomModel, GoeScaleIsImmaterial) {
  // O -> c O rescales L by c^2, a change of time unit, so observables at fixed
  // Gamma/g are unchanged.
  const auto inst = sample_random_jump(4, 21);
  auto scaled = inst;
  scaled.o = complex(2.5) * inst.o;
  for (double x : {0.3, 3.0}) {
    const auto a = random_model(inst, 1.0, x), b = random_model(scaled, 1.0, x);
    const auto oa = compute_observables(a, solve_direct(a).rho), ob = compute_observables(b, solve_direct(b).rho);
    EXPECT_NEAR(oa.delta, ob.delta, 1e-10);
    EXPECT_NEAR(oa.purity, ob.purity, 1e-10);
    EXPECT_NEAR(oa.negativity, ob.negativity, 1e-10);
  }
}
