#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/eigen_backend.hpp"
#include "ptsym/linalg/hermitian_eig.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/linalg/sampler.hpp"
#include "ptsym/models.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

struct RandomJumpInstance {
  std::size_t d = 0;
  ComplexMatrix o;
  ComplexMatrix u;                      ///< eigenvectors of R', columns ascending
  std::uint64_t seed = 0;               ///< seed actually used
  std::uint64_t requested_seed = 0;
  std::size_t resamples = 0;            ///< draws rejected for near-degenerate R'
  std::vector<double> eigenvalues;      ///< of R', ascending, first = 0
  std::vector<double> singular_values;  ///< of O, ascending
};

/// R = (G + G^T)/2 with standard-normal G.
inline RealMatrix sample_goe(std::size_t d, SeededSampler& s) {
  RealMatrix g(d, d);
  for (auto& x : g.values()) x = s.gaussian();
  RealMatrix r(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r(i, j) = 0.5 * (g(i, j) + g(j, i));
  return r;
}

/// Singular values, ascending. One-sided Jacobi SVD on O itself keeps the
/// zero singular value at machine precision.
inline std::vector<double> singular_values(const ComplexMatrix& a) { return backend::singular_values(a); }

/// Random traceless rank-(d-1) jump operator.
///
/// R' = R - lambda_0 = U D U† with D = diag(0, lambda_1, ..., lambda_{d-1});
/// L has sub-diagonal entries sqrt(lambda_1), ..., sqrt(lambda_{d-1}) so that
/// L L† = D, and O = U L U†. O is strictly lower triangular in the eigenbasis
/// of R', hence traceless, and U e_{d-1} / U† e_0 span the kernels of O / O†.
///
/// If two eigenvalues of R' are closer than 1e-12 the draw is repeated with
/// the next seed.
inline RandomJumpInstance sample_random_jump(std::size_t d, std::uint64_t seed, const Tolerances& tol = {}) {
  if (d < 2) throw InvalidArgument("sample_random_jump: d must be >= 2");
  RandomJumpInstance inst;
  inst.d = d;
  inst.requested_seed = seed;
  for (std::uint64_t s = seed;; ++s) {
    SeededSampler sampler(s);
    const RealMatrix r = sample_goe(d, sampler);
    const auto eig = hermitian_eig(to_complex(r), tol);
    bool degenerate = false;
    for (std::size_t k = 1; k < d; ++k) degenerate |= (eig.values[k] - eig.values[k - 1]) < 1e-12;
    if (degenerate) {
      ++inst.resamples;
      continue;
    }
    inst.seed = s;
    inst.u = eig.vectors;
    inst.eigenvalues.resize(d);
    for (std::size_t k = 0; k < d; ++k) inst.eigenvalues[k] = eig.values[k] - eig.values[0];
    break;
  }
  ComplexMatrix l(d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) l(i + 1, i) = std::sqrt(inst.eigenvalues[i + 1]);
  inst.o = inst.u * l * adjoint(inst.u);
  inst.singular_values = singular_values(inst.o);
  return inst;
}

inline LindbladModel random_model(const RandomJumpInstance& inst, double g, double gamma, ModelParams params = {}) {
  params.seed = inst.seed;
  return model_from_local_operator(inst.o, g, gamma, params, ModelKind::random);
}

/// Nearest-neighbour spacings of one GOE draw's eigenvalues, divided by their mean.
inline std::vector<double> goe_normalized_spacings(std::size_t d, std::uint64_t seed, const Tolerances& tol = {}) {
  SeededSampler sampler(seed);
  const auto eig = hermitian_eig(to_complex(sample_goe(d, sampler)), tol);
  std::vector<double> s(d - 1);
  for (std::size_t k = 0; k + 1 < d; ++k) s[k] = eig.values[k + 1] - eig.values[k];
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  for (auto& x : s) x /= mean;
  return s;
}

}  // namespace ptsym
