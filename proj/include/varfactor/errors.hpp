#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varfactor {

/// Malformed polynomial text. `position()` is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Base for recoverable numerical failures. The factor engine reacts to these
/// by shrinking sampling boxes or raising the working precision.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundViolated : public NumericalFailure {
 public:
  BoundViolated() : NumericalFailure("bound violated") {}
  explicit BoundViolated(const std::string& detail)
      : NumericalFailure("bound violated: " + detail) {}
};

class Divergence : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class NotRealPolynomial : public NumericalFailure {
 public:
  NotRealPolynomial() : NumericalFailure("not a real polynomial") {}
};

class NotRationalAtBound : public NumericalFailure {
 public:
  NotRationalAtBound() : NumericalFailure("not rational at bound L") {}
};

class RankDeficient : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class RootSolveFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class NoRegularPoint : public NumericalFailure {
 public:
  NoRegularPoint() : NumericalFailure("no regular point found") {}
};

class NoStableNeighborhood : public NumericalFailure {
 public:
  NoStableNeighborhood() : NumericalFailure("no stable neighborhood") {}
};

class BranchAmbiguity : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegenerateSampling : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class ConjugatePairingFailed : public NumericalFailure {
 public:
  ConjugatePairingFailed() : NumericalFailure("conjugate pairing failed") {}
  explicit ConjugatePairingFailed(const std::string& detail)
      : NumericalFailure("conjugate pairing failed: " + detail) {}
};

/// Sampling accuracy demanded by the error budget exceeds what the current
/// working precision delivers.
class PrecisionShortfall : public NumericalFailure {
 public:
  explicit PrecisionShortfall(int required_bits)
      : NumericalFailure("precision shortfall: need " + std::to_string(required_bits) + " bits"),
        required_bits_(required_bits) {}

  int required_bits() const noexcept { return required_bits_; }

 private:
  int required_bits_;
};

class NotSquareFree : public std::invalid_argument {
 public:
  NotSquareFree() : std::invalid_argument("input is not square-free") {}
};

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("timeout") {}
};

}  // namespace varfactor
