#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together (kron factors, partial traces, ...).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented precondition (non-unitary, non-Hermitian,
/// unnormalized, out-of-range parameter, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an outcome whose probability is below the configured floor,
/// or forming a weak value with orthogonal pre- and post-selection.
class ZeroProbability : public Error {
 public:
  using Error::Error;
};

/// A computed quantity left its contract (positivity, trace, stability).
/// Distinct from InvalidArgument: the inputs were admissible.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qmeas
