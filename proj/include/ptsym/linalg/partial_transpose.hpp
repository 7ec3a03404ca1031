#pragma once

#include "ptsym/errors.hpp"
#include "ptsym/linalg/matrix.hpp"

namespace ptsym {

/// Transpose on the first tensor factor of a (dA*dB)-dimensional operator:
/// rho^{T_A}(a b, a' b') = rho(a' b, a b').
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, std::size_t dA, std::size_t dB) {
  const std::size_t n = dA * dB;
  if (rho.rows() != n || rho.cols() != n) {
    throw InvalidArgument("partial_transpose: matrix is not (dA*dB) square");
  }
  ComplexMatrix out(n, n);
  for (std::size_t a = 0; a < dA; ++a)
    for (std::size_t b = 0; b < dB; ++b)
      for (std::size_t ap = 0; ap < dA; ++ap)
        for (std::size_t bp = 0; bp < dB; ++bp) out(a * dB + b, ap * dB + bp) = rho(ap * dB + b, a * dB + bp);
  return out;
}

}  // namespace ptsym
