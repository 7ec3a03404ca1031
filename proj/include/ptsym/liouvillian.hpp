#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "ptsym/errors.hpp"
#include "ptsym/linalg/hermitian_eig.hpp"
#include "ptsym/linalg/matrix.hpp"
#include "ptsym/linalg/sparse.hpp"
#include "ptsym/models.hpp"
#include "ptsym/tolerances.hpp"

namespace ptsym {

enum class SuperFormat { dense, sparse };

/// Vectorized Liouvillian acting on column-stacked density matrices.
/// Exactly one of `dense`/`sparse` is populated.
struct Superoperator {
  std::size_t n = 0;  ///< Hilbert dimension; the matrix is n^2 x n^2
  std::optional<ComplexMatrix> dense;
  std::optional<SparseMatrix> sparse;

  std::size_t size() const noexcept { return n * n; }

  ComplexVector multiply(std::span<const complex> x) const {
    return dense ? (*dense) * x : sparse->multiply(x);
  }

  ComplexMatrix to_dense() const { return dense ? *dense : sparse->to_dense(); }

  double frobenius_norm() const { return dense ? ptsym::frobenius_norm(*dense) : sparse->frobenius_norm(); }
};

/// L = -i(1 ⊗ H - H^T ⊗ 1) + sum_k [ conj(c_k) ⊗ c_k - 1/2 1 ⊗ c_k†c_k - 1/2 (c_k†c_k)^T ⊗ 1 ]
/// in the column-stacking convention vec(A rho B) = (B^T ⊗ A) vec(rho).
inline SparseMatrix liouvillian_sparse(const ComplexMatrix& h, const std::vector<ComplexMatrix>& jumps) {
  const std::size_t n = h.rows();
  const SparseMatrix id = SparseMatrix::identity(n);
  std::vector<SparseMatrix::Triplet> t;

  const SparseMatrix hs = SparseMatrix::from_dense(h);
  kron_triplets(id, hs, complex(0, -1), t);
  kron_triplets(transpose(hs), id, complex(0, 1), t);
  for (const auto& c : jumps) {
    const SparseMatrix cs = SparseMatrix::from_dense(c);
    if (cs.nnz() == 0) continue;
    const SparseMatrix cdc = SparseMatrix::from_dense(adjoint(c) * c);
    kron_triplets(conjugate(cs), cs, complex(1), t);
    kron_triplets(id, cdc, complex(-0.5), t);
    kron_triplets(transpose(cdc), id, complex(-0.5), t);
  }
  return SparseMatrix::from_triplets(n * n, n * n, std::move(t));
}

inline Superoperator assemble(const LindbladModel& model, SuperFormat format, const Tolerances& tol = {}) {
  const std::size_t n = model.dim();
  if (format == SuperFormat::dense && n > tol.dense_cap) {
    std::ostringstream os;
    os << "assemble: dense Liouvillian for Hilbert dimension " << n << " exceeds the dense cap (" << tol.dense_cap
       << "); use the sparse or matrix-free path";
    throw InvalidArgument(os.str());
  }
  Superoperator l;
  l.n = n;
  SparseMatrix s = liouvillian_sparse(model.h, model.jumps);
  if (format == SuperFormat::dense) {
    l.dense = s.to_dense();
  } else {
    l.sparse = std::move(s);
  }
  return l;
}

/// Matrix-free evaluation of drho/dt, with H_eff = H - i/2 sum c†c:
/// drho/dt = -i (H_eff rho - rho H_eff†) + sum_k c_k rho c_k†.
class LindbladRhs {
public:
  explicit LindbladRhs(const LindbladModel& model) : n_(model.dim()) {
    ComplexMatrix heff = model.h;
    for (const auto& c : model.jumps) {
      if (max_abs(c) == 0.0) continue;
      heff.add_scaled(complex(0, -0.5), adjoint(c) * c);
      jumps_.push_back(SparseMatrix::from_dense(c));
      jumps_dag_.push_back(SparseMatrix::from_dense(adjoint(c)));
    }
    heff_ = SparseMatrix::from_dense(heff);
    heff_dag_ = SparseMatrix::from_dense(adjoint(heff));
  }

  std::size_t dim() const noexcept { return n_; }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    if (rho.rows() != n_ || rho.cols() != n_) throw InvalidArgument("apply_rhs: rho has the wrong dimension");
    ComplexMatrix out = heff_.multiply(rho);
    out *= complex(0, -1);
    out.add_scaled(complex(0, 1), heff_dag_.left_multiply(rho));
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
      out += jumps_dag_[k].left_multiply(jumps_[k].multiply(rho));
    }
    return out;
  }

private:
  std::size_t n_;
  SparseMatrix heff_, heff_dag_;
  std::vector<SparseMatrix> jumps_, jumps_dag_;
};

inline ComplexMatrix apply_rhs(const LindbladModel& model, const ComplexMatrix& rho) { return LindbladRhs(model)(rho); }

/// Upper bound on the spectral radius of L from ||X||_2 <= sqrt(||X||_1 ||X||_inf):
/// rho(L) <= 2 ||H|| + 2 sum_k ||c_k||^2.
inline double liouvillian_radius_bound(const LindbladModel& model) {
  auto norm2_bound = [](const ComplexMatrix& x) {
    double n1 = 0.0, ninf = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double r = 0.0, c = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) {
        r += std::abs(x(i, j));
        c += std::abs(x(j, i));
      }
      ninf = std::max(ninf, r);
      n1 = std::max(n1, c);
    }
    return std::sqrt(n1 * ninf);
  };
  double b = 2.0 * norm2_bound(model.h);
  for (const auto& c : model.jumps) {
    const double s = norm2_bound(c);
    b += 2.0 * s * s;
  }
  return b;
}

struct PTCheckReport {
  double residual = 0.0;  ///< ||L[PT(H); PT(c_k)] - L[H; c_k]||_F
  double norm = 0.0;      ///< ||L||_F
  bool symmetric = false;
};

/// Compare the Liouvillian with the one built from PT-mapped H and jumps.
/// The comparison is done on the superoperators, so permuted jump labels are fine.
inline PTCheckReport pt_symmetry_check(const LindbladModel& model, const PTMapSpec& map, const Tolerances& tol = {}) {
  std::vector<ComplexMatrix> mapped;
  mapped.reserve(model.jumps.size());
  for (const auto& c : model.jumps) mapped.push_back(pt_map(c, map));
  const SparseMatrix l = liouvillian_sparse(model.h, model.jumps);
  const SparseMatrix lp = liouvillian_sparse(pt_map(model.h, map), mapped);
  PTCheckReport r;
  r.residual = (lp - l).frobenius_norm();
  r.norm = l.frobenius_norm();
  r.symmetric = r.residual <= tol.pt_relative * r.norm;
  return r;
}

inline PTCheckReport pt_symmetry_check(const LindbladModel& model, const Tolerances& tol = {}) {
  return pt_symmetry_check(model, model.pt, tol);
}

/// Eigenbasis of H in which the symmetry operator is also diagonal.
struct SymmetryResolvedBasis {
  std::vector<double> energies;
  std::vector<complex> zeta;             ///< symmetry eigenvalue of each column
  ComplexMatrix vectors;                 ///< unitary, columns |E_n>
  std::vector<std::size_t> cluster;      ///< degenerate-cluster label of each column
  double degeneracy_tolerance = 0.0;
};

/// Diagonalize H, then the symmetry operator inside each degenerate cluster
/// (|E_n - E_m| <= tol.degeneracy * max|E|). The symmetry operator must be
/// Hermitian and commute with H.
inline SymmetryResolvedBasis symmetry_resolved_basis(const ComplexMatrix& h, const ComplexMatrix& sym,
                                                     const Tolerances& tol = {}) {
  const double hscale = std::max(max_abs(h), 1e-300);
  const double comm = max_abs(commutator(h, sym));
  if (comm > 1e3 * tol.linalg * hscale) {
    std::ostringstream os;
    os << "symmetry operator does not commute with H (max|[H, P]| = " << comm << ")";
    throw InvalidArgument(os.str());
  }
  if (hermiticity_residual(sym) > tol.linalg) {
    throw InvalidArgument("symmetry operator is not Hermitian");
  }
  const auto eig = hermitian_eig(h, tol);
  const std::size_t n = h.rows();
  double emax = 0.0;
  for (double e : eig.values) emax = std::max(emax, std::abs(e));

  SymmetryResolvedBasis out;
  out.energies = eig.values;
  out.vectors = eig.vectors;
  out.zeta.assign(n, complex(0));
  out.cluster.assign(n, 0);
  out.degeneracy_tolerance = tol.degeneracy * emax;

  std::size_t start = 0, label = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && eig.values[end] - eig.values[end - 1] <= out.degeneracy_tolerance) ++end;
    const std::size_t k = end - start;
    ComplexMatrix block(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) block(i, j) = eig.vectors(i, start + j);
    ComplexMatrix w = adjoint(block) * sym * block;
    const auto inner = hermitian_eig(hermitian_part(w), tol);
    const ComplexMatrix rotated = block * inner.vectors;
    for (std::size_t j = 0; j < k; ++j) {
      out.zeta[start + j] = inner.values[j];
      out.cluster[start + j] = label;
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, start + j) = rotated(i, j);
    }
    ++label;
    start = end;
  }
  return out;
}

struct MixednessObstruction {
  double value = 0.0;                 ///< max over degenerate pairs of |<E_n| sum_k [c_k, c_k†] |E_m>|, per unit Gamma
  double degeneracy_tolerance = 0.0;  ///< absolute energy threshold used
  double population_drift = 0.0;      ///< max_n |<E_n| L(1/n) |E_n>|, per unit Gamma
  std::size_t clusters = 0;
};

/// First-order (in Gamma) drift of the fully mixed state in the
/// symmetry-resolved energy basis.
///
/// For a degenerate pair (n, m) the drift of rho_{nm} is
/// (1/n) <E_n| sum_k [c_k, c_k†] |E_m>; with the symmetry relation this equals
/// (1/n) <E_n| [c_A, c_A†] |E_m> (1 - conj(zeta_n) zeta_m), so it vanishes for
/// equal symmetry eigenvalues. A positive value means the fully mixed state is
/// not stationary at small Gamma.
inline MixednessObstruction mixedness_obstruction(const LindbladModel& model, const PTMapSpec& map,
                                                  const Tolerances& tol = {}) {
  const auto basis = symmetry_resolved_basis(model.h_unit, map.symmetry(), tol);
  const std::size_t n = model.dim();

  // Commutator sum per unit Gamma.
  ComplexMatrix k(n, n);
  for (std::size_t j = 0; j < model.unit_jumps.size(); ++j) {
    const auto& u = model.unit_jumps[j];
    const double w = model.params.rate_factor * model.jump_weights[j];
    k.add_scaled(complex(w), commutator(u, adjoint(u)));
  }
  const ComplexMatrix ke = adjoint(basis.vectors) * k * basis.vectors;

  MixednessObstruction out;
  out.degeneracy_tolerance = basis.degeneracy_tolerance;
  out.clusters = basis.cluster.empty() ? 0 : basis.cluster.back() + 1;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (basis.cluster[a] == basis.cluster[b]) out.value = std::max(out.value, std::abs(ke(a, b)));

  // Population drift from the matrix-free right-hand side (independent route).
  const LindbladModel unit = with_rates(model, model.g, 1.0);
  ComplexMatrix mixed = ComplexMatrix::identity(n);
  mixed *= complex(1.0 / static_cast<double>(n));
  const ComplexMatrix drift = adjoint(basis.vectors) * apply_rhs(unit, mixed) * basis.vectors;
  for (std::size_t a = 0; a < n; ++a) out.population_drift = std::max(out.population_drift, std::abs(drift(a, a)));
  return out;
}

inline MixednessObstruction mixedness_obstruction(const LindbladModel& model, const Tolerances& tol = {}) {
  return mixedness_obstruction(model, model.pt, tol);
}

}  // namespace ptsym
