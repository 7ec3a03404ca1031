#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/operators.hpp"

namespace ptsym {

enum class ModelKind { spin, boson, multijump, generalized, appendix_a, random, custom };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::spin: return "spin";
    case ModelKind::boson: return "boson";
    case ModelKind::multijump: return "multijump";
    case ModelKind::generalized: return "generalized";
    case ModelKind::appendix_a: return "appendix-a";
    case ModelKind::random: return "random";
    case ModelKind::custom: return "custom";
  }
  return "unknown";
}

inline ModelKind parse_model_kind(std::string_view s) {
  for (auto k : {ModelKind::spin, ModelKind::boson, ModelKind::multijump, ModelKind::generalized,
                 ModelKind::appendix_a, ModelKind::random, ModelKind::custom}) {
    if (s == to_string(k)) return k;
  }
  if (s == "appendixA" || s == "appendix_a") return ModelKind::appendix_a;
  throw InvalidArgument("unknown model kind '" + std::string(s) + "'");
}

/// True for kinds whose local observables are spin components.
inline bool is_spin_kind(ModelKind k) {
  return k == ModelKind::spin || k == ModelKind::multijump || k == ModelKind::generalized ||
         k == ModelKind::appendix_a;
}

/// Jump operators are c = sqrt(rate_factor * Gamma) * O. With the default
/// factor 2 a pure loss channel O = a damps the amplitude <a> at rate Gamma,
/// which places the classical PT threshold at Gamma = g.
inline constexpr double kAmplitudeRateFactor = 2.0;

struct ModelParams {
  double p = 1.0;                          ///< multijump temperature parameter, in [0, 1]
  std::uint64_t seed = 0;                  ///< random kind
  double gamma_b_scale = 1.0;              ///< Gamma_B / Gamma_A; anything but 1 breaks the symmetry
  double rate_factor = kAmplitudeRateFactor;
};

/// Two coupled d-level subsystems with Hamiltonian H and jump operators.
///
/// `h_unit` and `unit_jumps` are the dimensionless operators (g = 1, unit
/// rate); `h` and `jumps` carry the g and sqrt(rate) prefactors.
struct LindbladModel {
  ModelKind kind = ModelKind::custom;
  std::size_t d = 0;
  double spin = 0.0;  ///< S for spin kinds, 0 otherwise
  double g = 1.0;
  double gamma = 0.0;
  ModelParams params;

  ComplexMatrix h_unit;
  std::vector<ComplexMatrix> unit_jumps;
  std::vector<double> jump_weights;  ///< c_k = sqrt(rate_factor * Gamma * jump_weights[k]) * unit_jumps[k]

  ComplexMatrix h;
  std::vector<ComplexMatrix> jumps;

  /// Local operator O entering the symmetry parameter (d x d).
  ComplexMatrix local_op;
  /// Local diagonal observable reported per subsystem (S^z or number operator), if any.
  std::optional<ComplexMatrix> local_z;

  PTMapSpec pt;

  std::size_t dim() const noexcept { return d * d; }
};

namespace detail {

inline ComplexMatrix exchange_hamiltonian(const ComplexMatrix& o) {
  const ComplexMatrix oa = on_a(o), ob = on_b(o);
  return oa * adjoint(ob) + adjoint(oa) * ob;
}

inline ComplexMatrix pair_hamiltonian(const SubsystemOps& s) {
  return on_a(s.raise) * on_b(s.raise) + on_a(s.lower) * on_b(s.lower);
}

inline void finalize(LindbladModel& m) {
  m.h = complex(m.g) * m.h_unit;
  m.jumps.clear();
  for (std::size_t k = 0; k < m.unit_jumps.size(); ++k) {
    const double rate = m.params.rate_factor * m.gamma * m.jump_weights[k];
    m.jumps.push_back(complex(std::sqrt(rate)) * m.unit_jumps[k]);
  }
}

inline void check_common(double g, double gamma, const ModelParams& params) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidArgument("build_model: g must be finite and >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("build_model: Gamma must be finite and >= 0");
  if (!(params.gamma_b_scale >= 0.0)) throw InvalidArgument("build_model: gamma_b_scale must be >= 0");
  if (!(params.rate_factor > 0.0)) throw InvalidArgument("build_model: rate_factor must be > 0");
}

}  // namespace detail

/// Balanced gain/loss model built from an arbitrary local operator O:
/// H = g (O_A O_B† + O_A† O_B), jumps {O ⊗ 1, 1 ⊗ O†} at rate Gamma.
inline LindbladModel model_from_local_operator(const ComplexMatrix& o, double g, double gamma,
                                               const ModelParams& params = {}, ModelKind kind = ModelKind::custom) {
  if (!o.square() || o.rows() < 2) throw InvalidArgument("model_from_local_operator: O must be square, d >= 2");
  detail::check_common(g, gamma, params);
  LindbladModel m;
  m.kind = kind;
  m.d = o.rows();
  m.g = g;
  m.gamma = gamma;
  m.params = params;
  m.h_unit = detail::exchange_hamiltonian(o);
  m.unit_jumps = {on_a(o), on_b(adjoint(o))};
  m.jump_weights = {1.0, params.gamma_b_scale};
  m.local_op = o;
  m.pt = plain_pt_map(m.d);
  detail::finalize(m);
  return m;
}

/// Catalog constructor.
///
/// `size` is the spin S for spin-type kinds and the local dimension d for
/// the boson kind. The random and custom kinds are built from a local
/// operator (see random_ensemble.hpp and io.hpp).
inline LindbladModel build_model(ModelKind kind, double size, double g, double gamma, const ModelParams& params = {},
                                 const Tolerances& tol = {}) {
  detail::check_common(g, gamma, params);
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw InvalidArgument("build_model: p must lie in [0, 1]");

  switch (kind) {
    case ModelKind::spin:
    case ModelKind::boson: {
      SubsystemOps s;
      if (kind == ModelKind::spin) {
        s = spin_ops(size);
      } else {
        const double rounded = std::round(size);
        if (std::abs(size - rounded) > 1e-12 || rounded < 2) {
          throw InvalidArgument("build_model: boson dimension must be an integer >= 2");
        }
        s = boson_ops(static_cast<std::size_t>(rounded));
      }
      auto m = model_from_local_operator(s.raise, g, gamma, params, kind);
      m.spin = kind == ModelKind::spin ? size : 0.0;
      m.local_z = s.z;
      return m;
    }
    case ModelKind::multijump: {
      const auto s = spin_ops(size);
      LindbladModel m;
      m.kind = kind;
      m.d = s.d;
      m.spin = size;
      m.g = g;
      m.gamma = gamma;
      m.params = params;
      m.h_unit = detail::exchange_hamiltonian(s.raise);
      const double p = params.p, rb = params.gamma_b_scale;
      m.unit_jumps = {on_a(s.raise), on_a(s.lower), on_b(s.raise), on_b(s.lower)};
      m.jump_weights = {(1.0 + p) / 2.0, (1.0 - p) / 2.0, rb * (1.0 - p) / 2.0, rb * (1.0 + p) / 2.0};
      m.local_op = s.raise;
      m.local_z = s.z;
      m.pt = plain_pt_map(m.d);
      detail::finalize(m);
      return m;
    }
    case ModelKind::generalized:
    case ModelKind::appendix_a: {
      const auto s = spin_ops(size);
      LindbladModel m;
      m.kind = kind;
      m.d = s.d;
      m.spin = size;
      m.g = g;
      m.gamma = gamma;
      m.params = params;
      m.h_unit = detail::pair_hamiltonian(s);
      if (kind == ModelKind::generalized) {
        m.unit_jumps = {on_a(s.lower), on_b(s.lower)};
        m.pt = PTMapSpec{parity_swap(s.d), unitary_exp(on_a(s.x) + on_b(s.x), M_PI, tol)};
      } else {
        m.unit_jumps = {on_a(s.lower), on_b(s.raise)};
        m.pt = plain_pt_map(s.d);
      }
      m.jump_weights = {1.0, params.gamma_b_scale};
      m.local_op = s.lower;
      m.local_z = s.z;
      detail::finalize(m);
      return m;
    }
    case ModelKind::random:
    case ModelKind::custom:
      throw InvalidArgument("build_model: random/custom models are built from a local operator or operator file");
  }
  throw InvalidArgument("build_model: unknown kind");
}

/// Same model at a different (g, Gamma).
inline LindbladModel with_rates(LindbladModel m, double g, double gamma) {
  detail::check_common(g, gamma, m.params);
  m.g = g;
  m.gamma = gamma;
  detail::finalize(m);
  return m;
}

}  // namespace ptsym
