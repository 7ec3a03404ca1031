#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/hermitian_eig.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

enum class SubsystemKind { spin, boson, custom };

/// Local operators of one subsystem. For spins the basis is |S>, |S-1>, ..., |-S>;
/// for truncated bosons it is |0>, ..., |d-1> and `z` holds the number operator.
struct SubsystemOps {
  std::size_t d = 0;
  ComplexMatrix raise;
  ComplexMatrix lower;
  ComplexMatrix z;
  ComplexMatrix x;
  SubsystemKind kind = SubsystemKind::custom;
};

/// Spin-S operators, S a positive multiple of 1/2.
inline SubsystemOps spin_ops(double spin) {
  const double twice = 2.0 * spin;
  if (!(spin > 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw InvalidArgument("spin_ops: S must be a positive half-integer, got " + std::to_string(spin));
  }
  const auto d = static_cast<std::size_t>(std::lround(twice)) + 1;
  SubsystemOps ops{d, ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d),
                   SubsystemKind::spin};
  for (std::size_t k = 0; k < d; ++k) {
    const double m = spin - static_cast<double>(k);
    ops.z(k, k) = m;
    if (k > 0) {
      // <m+1| S+ |m>
      ops.raise(k - 1, k) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
    }
  }
  ops.lower = adjoint(ops.raise);
  ops.x = 0.5 * (ops.raise + ops.lower);
  return ops;
}

/// Truncated ladder operators: lower|n> = sqrt(n)|n-1>, raise = lower†, so raise|d-1> = 0.
inline SubsystemOps boson_ops(std::size_t d) {
  if (d < 2) throw InvalidArgument("boson_ops: local dimension must be >= 2");
  SubsystemOps ops{d, ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d),
                   SubsystemKind::boson};
  for (std::size_t k = 0; k < d; ++k) {
    ops.z(k, k) = static_cast<double>(k);
    if (k > 0) ops.lower(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  ops.raise = adjoint(ops.lower);
  ops.x = 0.5 * (ops.raise + ops.lower);
  return ops;
}

/// Subsystem swap on C^d ⊗ C^d: P(v ⊗ w) = w ⊗ v.
inline ComplexMatrix parity_swap(std::size_t d) {
  const std::size_t n = d * d;
  ComplexMatrix p(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) p(j * d + i, i * d + j) = 1.0;
  return p;
}

/// Parity plus an optional extra unitary. The generalized map is
/// PT(O) = P U O† (U P)^{-1}; without U it reduces to P O† P^{-1}.
struct PTMapSpec {
  ComplexMatrix parity;
  std::optional<ComplexMatrix> extra_unitary;

  /// The symmetry operator that must commute with H: P or P U.
  ComplexMatrix symmetry() const { return extra_unitary ? parity * *extra_unitary : parity; }
};

inline PTMapSpec plain_pt_map(std::size_t d) { return PTMapSpec{parity_swap(d), std::nullopt}; }

inline ComplexMatrix pt_map(const ComplexMatrix& op, const PTMapSpec& map) {
  const std::size_t n = map.parity.rows();
  if (op.rows() != n || op.cols() != n) {
    throw InvalidArgument("pt_map: operator dimension does not match the parity operator");
  }
  // P^{-1} = P for a swap; (U P)^{-1} = P U† for unitary U.
  if (!map.extra_unitary) return map.parity * adjoint(op) * map.parity;
  const ComplexMatrix& u = *map.extra_unitary;
  return map.parity * u * adjoint(op) * map.parity * adjoint(u);
}

/// exp(i * angle * G) for Hermitian G.
inline ComplexMatrix unitary_exp(const ComplexMatrix& generator, double angle, const Tolerances& tol = {}) {
  return hermitian_function(
      generator, [angle](double lambda) { return std::exp(complex(0.0, angle * lambda)); }, tol);
}

/// A ⊗ 1 and 1 ⊗ A on the two-subsystem space.
inline ComplexMatrix on_a(const ComplexMatrix& op) { return kron(op, ComplexMatrix::identity(op.rows())); }
inline ComplexMatrix on_b(const ComplexMatrix& op) { return kron(ComplexMatrix::identity(op.rows()), op); }

}  // namespace ptsym
