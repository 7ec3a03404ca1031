#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ptsym/linalg/matrix.hpp"

namespace ptsym {

/// Compressed sparse row matrix over complex values.
///
/// Column indices inside a row are strictly increasing; explicit zeros are
/// dropped on construction from a dense matrix or triplets.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {}

  struct Triplet {
    std::size_t row;
    std::size_t col;
    complex value;
  };

  /// Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> t) {
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix s(rows, cols);
    s.columns_.reserve(t.size());
    s.values_.reserve(t.size());
    std::size_t k = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      while (k < t.size() && t[k].row == r) {
        if (t[k].col >= cols) throw InvalidArgument("SparseMatrix: column index out of range");
        complex acc = t[k].value;
        const std::size_t c = t[k].col;
        ++k;
        while (k < t.size() && t[k].row == r && t[k].col == c) acc += t[k++].value;
        if (acc != complex(0)) {
          s.columns_.push_back(c);
          s.values_.push_back(acc);
        }
      }
      s.offsets_[r + 1] = s.columns_.size();
    }
    if (k != t.size()) throw InvalidArgument("SparseMatrix: row index out of range");
    return s;
  }

  static SparseMatrix from_dense(const ComplexMatrix& a) {
    SparseMatrix s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (a(i, j) != complex(0)) {
          s.columns_.push_back(j);
          s.values_.push_back(a(i, j));
        }
      }
      s.offsets_[i + 1] = s.columns_.size();
    }
    return s;
  }

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix s(n, n);
    s.columns_.resize(n);
    s.values_.assign(n, complex(1));
    for (std::size_t i = 0; i < n; ++i) {
      s.columns_[i] = i;
      s.offsets_[i + 1] = i + 1;
    }
    return s;
  }

  ComplexMatrix to_dense() const {
    ComplexMatrix a(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) a(i, columns_[k]) = values_[k];
    return a;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const std::size_t> columns() const noexcept { return columns_; }
  std::span<const complex> values() const noexcept { return values_; }

  /// Check the CSR structural invariants.
  bool well_formed() const {
    if (offsets_.size() != rows_ + 1 || offsets_.front() != 0 || offsets_.back() != values_.size()) return false;
    if (columns_.size() != values_.size()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (offsets_[i] > offsets_[i + 1]) return false;
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        if (columns_[k] >= cols_) return false;
        if (k > offsets_[i] && columns_[k] <= columns_[k - 1]) return false;
      }
    }
    return true;
  }

  ComplexVector multiply(std::span<const complex> x) const {
    if (x.size() != cols_) throw InvalidArgument("SparseMatrix::multiply: dimension mismatch");
    ComplexVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      complex acc{};
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) acc += values_[k] * x[columns_[k]];
      y[i] = acc;
    }
    return y;
  }

  /// this * B for dense B.
  ComplexMatrix multiply(const ComplexMatrix& b) const {
    if (b.rows() != cols_) throw InvalidArgument("SparseMatrix * dense: dimension mismatch");
    ComplexMatrix c(rows_, b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < rows_; ++i) {
      complex* crow = c.row(i).data();
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
        const complex v = values_[k];
        const complex* brow = b.row(columns_[k]).data();
        for (std::size_t j = 0; j < n; ++j) crow[j] += v * brow[j];
      }
    }
    return c;
  }

  /// B * this for dense B.
  ComplexMatrix left_multiply(const ComplexMatrix& b) const {
    if (b.cols() != rows_) throw InvalidArgument("dense * SparseMatrix: dimension mismatch");
    ComplexMatrix c(b.rows(), cols_);
    for (std::size_t r = 0; r < b.rows(); ++r) {
      complex* crow = c.row(r).data();
      const complex* brow = b.row(r).data();
      for (std::size_t i = 0; i < rows_; ++i) {
        const complex bri = brow[i];
        if (bri == complex(0)) continue;
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) crow[columns_[k]] += bri * values_[k];
      }
    }
    return c;
  }

  SparseMatrix adjoint() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) t.push_back({columns_[k], i, std::conj(values_[k])});
    return from_triplets(cols_, rows_, std::move(t));
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : values_) s += std::norm(v);
    return std::sqrt(s);
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, complex(1), b); }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, complex(-1), b); }

  /// a + s*b
  static SparseMatrix combine(const SparseMatrix& a, complex s, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidArgument("SparseMatrix: shape mismatch");
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    a.append_triplets(t, complex(1));
    b.append_triplets(t, s);
    return from_triplets(a.rows_, a.cols_, std::move(t));
  }

  void append_triplets(std::vector<Triplet>& out, complex scale, std::size_t row_offset = 0,
                       std::size_t col_offset = 0) const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
        out.push_back({i + row_offset, columns_[k] + col_offset, scale * values_[k]});
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> columns_;
  std::vector<complex> values_;
};

/// Sparse Kronecker product, appended to a triplet list with a scale factor.
inline void kron_triplets(const SparseMatrix& a, const SparseMatrix& b, complex scale,
                          std::vector<SparseMatrix::Triplet>& out) {
  const auto ao = a.offsets(), ac = a.columns();
  const auto av = a.values();
  const auto bo = b.offsets(), bc = b.columns();
  const auto bv = b.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t ka = ao[i]; ka < ao[i + 1]; ++ka)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t kb = bo[p]; kb < bo[p + 1]; ++kb)
          out.push_back({i * b.rows() + p, ac[ka] * b.cols() + bc[kb], scale * av[ka] * bv[kb]});
}

inline SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(a.nnz() * b.nnz());
  kron_triplets(a, b, complex(1), t);
  return SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(t));
}

inline SparseMatrix transpose(const SparseMatrix& a) {
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(a.nnz());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.offsets()[i]; k < a.offsets()[i + 1]; ++k) t.push_back({a.columns()[k], i, a.values()[k]});
  return SparseMatrix::from_triplets(a.cols(), a.rows(), std::move(t));
}

inline SparseMatrix conjugate(const SparseMatrix& a) {
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(a.nnz());
  a.append_triplets(t, complex(1));
  for (auto& x : t) x.value = std::conj(x.value);
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

}  // namespace ptsym
