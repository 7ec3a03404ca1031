#pragma once

#include <stdexcept>
#include <string>

namespace ptsym {

/// Caller supplied something the operation cannot accept (wrong shape, bad parameter).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: non-convergence, degenerate null space, lost positivity.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The null space handed to the constrained solver has more than one direction.
class DegenerateNullSpace : public NumericalError {
public:
  explicit DegenerateNullSpace(const std::string& what, double rdiag_ratio)
      : NumericalError(what), ratio(rdiag_ratio) {}
  double ratio;
};

}  // namespace ptsym
