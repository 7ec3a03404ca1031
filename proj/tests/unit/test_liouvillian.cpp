#include <gtest/gtest.h>

#include <cmath>

#include "ptsym/ptsym.hpp"

using namespace ptsym;

namespace {

ComplexMatrix random_density(std::size_t n, std::uint64_t seed) {
  SeededSampler s(seed);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = {s.gaussian(), s.gaussian()};
  ComplexMatrix rho = a * adjoint(a);
  rho *= complex(1.0) / trace(rho);
  return rho;
}

// Term-by-term Lindblad right-hand side written straight from the master equation.
ComplexMatrix lindblad_oracle(const LindbladModel& m, const ComplexMatrix& rho) {
  ComplexMatrix out = complex(0, -1) * (m.h * rho - rho * m.h);
  for (const auto& c : m.jumps) {
    const ComplexMatrix cd = adjoint(c);
    out += c * rho * cd;
    out += complex(-0.5) * (cd * c * rho + rho * cd * c);
  }
  return out;
}

std::vector<LindbladModel> catalog(double x) {
  ModelParams mj;
  mj.p = 0.8;
  return {build_model(ModelKind::spin, 1.0, 1.0, x),
          build_model(ModelKind::boson, 3.0, 1.0, x),
          build_model(ModelKind::multijump, 1.0, 1.0, x, mj),
          build_model(ModelKind::generalized, 1.0, 1.0, x),
          build_model(ModelKind::appendix_a, 1.0, 1.0, x),
          random_model(sample_random_jump(3, 11), 1.0, x)};
}

}  // namespace

TEST(Liouvillian, MatrixFreeMatchesOracle) {
  for (const auto& m : catalog(0.7)) {
    const auto rho = random_density(m.dim(), 1);
    EXPECT_LT(max_abs_diff(apply_rhs(m, rho), lindblad_oracle(m, rho)), 1e-12) << to_string(m.kind);
  }
}

TEST(Liouvillian, SuperoperatorMatchesOracle) {
  for (const auto& m : catalog(1.3)) {
    const auto rho = random_density(m.dim(), 2);
    const auto l = assemble(m, SuperFormat::sparse);
    const auto lrho = unvec(l.multiply(vec(rho)), m.dim());
    EXPECT_LT(max_abs_diff(lrho, lindblad_oracle(m, rho)), 1e-12) << to_string(m.kind);
    const auto dense = assemble(m, SuperFormat::dense);
    EXPECT_LT(max_abs_diff(*dense.dense, l.to_dense()), 1e-14);
  }
}

TEST(Liouvillian, TracePreservingAndHermiticityPreserving) {
  for (const auto& m : catalog(0.4)) {
    const auto rho = random_density(m.dim(), 3);
    const auto d = apply_rhs(m, rho);
    EXPECT_LT(std::abs(trace(d)), 1e-12);
    EXPECT_LT(hermiticity_residual(d), 1e-12);
  }
}

TEST(Liouvillian, DenseCapEnforced) {
  Tolerances tol;
  tol.dense_cap = 8;
  EXPECT_THROW(assemble(build_model(ModelKind::spin, 1.0, 1.0, 1.0), SuperFormat::dense, tol), InvalidArgument);
  EXPECT_NO_THROW(assemble(build_model(ModelKind::spin, 1.0, 1.0, 1.0), SuperFormat::sparse, tol));
}

TEST(Liouvillian, RadiusBoundDominatesSpectrum) {
  for (const auto& m : catalog(2.0)) {
    const double bound = liouvillian_radius_bound(m);
    for (const auto& z : liouvillian_spectrum(m, EigenBackend::reference).eigenvalues)
      EXPECT_LE(std::abs(z), bound * (1 + 1e-12)) << to_string(m.kind);
  }
}

TEST(PTSymmetry, CatalogModelsAreSymmetric) {
  for (double x : {0.1, 1.0, 5.0}) {
    for (const auto& m : catalog(x)) {
      const auto r = pt_symmetry_check(m);
      EXPECT_TRUE(r.symmetric) << to_string(m.kind);
      EXPECT_LE(r.residual, 1e-10 * r.norm) << to_string(m.kind);
    }
  }
}

TEST(PTSymmetry, UnbalancedRatesBreakSymmetry) {
  ModelParams p;
  p.gamma_b_scale = 1.5;
  for (auto kind : {ModelKind::spin, ModelKind::appendix_a}) {
    const auto r = pt_symmetry_check(build_model(kind, 1.0, 1.0, 1.0, p));
    EXPECT_FALSE(r.symmetric);
    EXPECT_GT(r.residual, 1e-3 * r.norm);
  }
}

TEST(PTSymmetry, GeneralizedModelNeedsExtraUnitary) {
  const auto m = build_model(ModelKind::generalized, 1.0, 1.0, 1.0);
  ASSERT_TRUE(m.pt.extra_unitary.has_value());
  EXPECT_TRUE(pt_symmetry_check(m, m.pt).symmetric);
  EXPECT_FALSE(pt_symmetry_check(m, plain_pt_map(m.d)).symmetric);
}

TEST(PTSymmetry, ResidualIsGammaIndependentAtZeroLoss) {
  // Gamma = 0 leaves only the Hamiltonian part, which the swap maps to itself.
  const auto r = pt_symmetry_check(build_model(ModelKind::spin, 1.5, 1.0, 0.0));
  EXPECT_TRUE(r.symmetric);
}

TEST(MixednessObstruction, VanishesForSymmetricCatalog) {
  for (const auto& m : catalog(1.0)) {
    if (m.kind == ModelKind::appendix_a) continue;
    const auto ob = mixedness_obstruction(m);
    EXPECT_LT(ob.population_drift, 1e-12) << to_string(m.kind);
  }
}

TEST(MixednessObstruction, AppendixModelIsObstructed) {
  const auto m = build_model(ModelKind::appendix_a, 1.0, 1.0, 1.0);
  const auto ob = mixedness_obstruction(m);
  EXPECT_GT(ob.value, 1e-3);
  // Independent check: the first-order drift of a degenerate coherence is
  // <E_n| L(1/n) |E_m> from the oracle right-hand side.
  const auto basis = symmetry_resolved_basis(m.h_unit, m.pt.symmetry());
  const auto unit = with_rates(m, 1.0, 1.0);
  ComplexMatrix mixed = ComplexMatrix::identity(m.dim());
  mixed *= complex(1.0 / static_cast<double>(m.dim()));
  const auto d = adjoint(basis.vectors) * lindblad_oracle(unit, mixed) * basis.vectors;
  double worst = 0.0;
  for (std::size_t a = 0; a < m.dim(); ++a)
    for (std::size_t b = 0; b < m.dim(); ++b)
      if (basis.cluster[a] == basis.cluster[b]) worst = std::max(worst, std::abs(d(a, b)));
  EXPECT_NEAR(worst * static_cast<double>(m.dim()), ob.value, 1e-10);
}

TEST(SymmetryResolvedBasis, DiagonalizesHamiltonianAndSymmetry) {
  const auto m = build_model(ModelKind::spin, 1.0, 1.0, 1.0);
  const auto sym = m.pt.symmetry();
  const auto b = symmetry_resolved_basis(m.h_unit, sym);
  const auto he = adjoint(b.vectors) * m.h_unit * b.vectors;
  const auto pe = adjoint(b.vectors) * sym * b.vectors;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    EXPECT_NEAR(he(i, i).real(), b.energies[i], 1e-12);
    EXPECT_NEAR(std::abs(std::abs(b.zeta[i]) - 1.0), 0.0, 1e-12);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (i == j) continue;
      EXPECT_LT(std::abs(he(i, j)), 1e-12);
      if (b.cluster[i] == b.cluster[j]) EXPECT_LT(std::abs(pe(i, j)), 1e-12);
    }
  }
}

TEST(SymmetryResolvedBasis, RejectsNonCommutingSymmetry) {
  const auto ops = spin_ops(0.5);
  EXPECT_THROW(symmetry_resolved_basis(on_a(ops.z), parity_swap(2)), InvalidArgument);
}
