#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ptsym/ptsym.hpp"

using namespace ptsym;

TEST(FormatDouble, RoundTripsExactly) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Grid, ListAndLogspace) {
  EXPECT_EQ(parse_grid("0.5,1,2"), (std::vector<double>{0.5, 1.0, 2.0}));
  const auto g = parse_grid("logspace:0.01,100,25");
  ASSERT_EQ(g.size(), 25u);
  EXPECT_EQ(g.front(), 0.01);
  EXPECT_EQ(g.back(), 100.0);
  EXPECT_NEAR(g[12], 1.0, 1e-14);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_NEAR(g[k] / g[k - 1], std::pow(10.0, 4.0 / 24.0), 1e-12);
  EXPECT_EQ(parse_grid("logspace:3,7,1"), (std::vector<double>{3.0}));
  for (const char* bad : {"", "a", "1,,2", "0,1", "-1", "logspace:0,1,3", "logspace:1,2", "logspace:1,2,2.5", "1x"})
    EXPECT_THROW(parse_grid(bad), InvalidArgument) << bad;
}

TEST(OperatorFile, RoundTripPreservesModel) {
  ModelParams mj;
  mj.p = 0.8;
  for (const auto& m : {build_model(ModelKind::spin, 1.0, 1.0, 1.0), build_model(ModelKind::multijump, 0.5, 1.0, 1.0, mj),
                        random_model(sample_random_jump(3, 2), 1.0, 1.0)}) {
    std::stringstream ss;
    write_operator_file(ss, to_operator_file(m));
    const auto f = read_operator_file(ss);
    EXPECT_EQ(f.d, m.d);
    const auto custom = model_from_operator_file(f, 1.0, 1.7);
    const auto orig = with_rates(m, 1.0, 1.7);
    EXPECT_EQ(max_abs_diff(custom.h, orig.h), 0.0);
    // The Liouvillians agree, so steady states and observables do too.
    const auto a = solve_direct(custom), b = solve_direct(orig);
    EXPECT_LT(max_abs_diff(a.rho, b.rho), 1e-12) << to_string(m.kind);
    const auto oa = compute_observables(custom, a.rho), ob = compute_observables(orig, b.rho);
    EXPECT_NEAR(oa.delta, ob.delta, 1e-12);
    EXPECT_NEAR(oa.negativity, ob.negativity, 1e-12);
  }
}

TEST(OperatorFile, CommentsBlankLinesAndRealEntries) {
  std::istringstream in(
      "# a qubit pair\n"
      "d 2\n\n"
      "H\n"
      "0 0 0 0\n0 0 1 0\n0 1 0 0\n0 0 0 0\n"
      "JUMP 0\n"
      "0 0 1,0 0\n0 0 0 1\n0 0 0 0\n0 0 0 0\n");
  const auto f = read_operator_file(in);
  EXPECT_EQ(f.d, 2u);
  EXPECT_EQ(f.jumps.size(), 1u);
  EXPECT_EQ(f.h(1, 2), complex(1.0));
  EXPECT_FALSE(f.o.has_value());
}

TEST(OperatorFile, MalformedInputsRejected) {
  const std::vector<std::string> bad = {
      "",
      "d 1\nH\n0\nJUMP 0\n0\n",
      "d 2\nH\n0 0 0 0\n",
      "d 2\nH\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n",
      "d 2\nH\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\nJUMP 1\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n",
      "d 2\nH\n0 0 0 0\n0 0 0\n",
      "d 2\nX\n",
      "d 2\nH\n0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 q\n"};
  for (const auto& text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(read_operator_file(in), InvalidArgument) << text;
  }
  OperatorFile f;
  f.d = 2;
  f.h = ComplexMatrix(4, 4);
  f.h(0, 1) = 1.0;  // not Hermitian
  f.jumps = {ComplexMatrix(4, 4)};
  EXPECT_THROW(model_from_operator_file(f, 1.0, 1.0), InvalidArgument);
}

TEST(SweepCsv, HeaderAndReproducibility) {
  const auto base = build_model(ModelKind::spin, 1.0, 1.0, 1.0);
  const auto grid = parse_grid("logspace:0.1,10,5");
  std::ostringstream a, b;
  write_sweep_csv(a, run_sweep(base, grid), false);
  write_sweep_csv(b, run_sweep(base, grid, Backend::auto_select, {}, 3), false);
  EXPECT_EQ(a.str(), b.str());
  const std::string text = a.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "modelKind,d,S,g,gammaOverG,delta,purity,negativity,szA,szB,occA,occB,residual,solver,iterations,seed");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
  EXPECT_EQ(text.find('\r'), std::string::npos);

  std::ostringstream boson;
  write_sweep_csv(boson, run_sweep(build_model(ModelKind::boson, 3.0, 1.0, 1.0), {1.0}), true);
  const std::string bh = boson.str().substr(0, boson.str().find('\n'));
  EXPECT_NE(bh.find(",nA,nB,"), std::string::npos);
  EXPECT_NE(bh.find(",wallTimeMs"), std::string::npos);
}

TEST(Sweep, DeltaNondecreasingForSpin) {
  const auto recs = run_sweep(build_model(ModelKind::spin, 2.0, 1.0, 1.0), parse_grid("logspace:0.01,100,25"));
  ASSERT_EQ(recs.size(), 25u);
  for (std::size_t k = 1; k < recs.size(); ++k) EXPECT_GE(recs[k].obs.delta, recs[k - 1].obs.delta - 1e-12) << k;
}

TEST(Sweep, ErrorsPropagate) {
  // Gamma/g grid values are validated before any solve.
  EXPECT_THROW(parse_grid("0"), InvalidArgument);
  Tolerances tol;
  tol.rhs_budget = 10;
  EXPECT_THROW(run_sweep(build_model(ModelKind::spin, 1.0, 1.0, 1.0), {1.0}, Backend::relax, tol), NumericalError);
}
