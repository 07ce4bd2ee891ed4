#pragma once

#include <stdexcept>
#include <string>

namespace warped {

// Base class for every error thrown by this library.
class WarpedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Jet division (or sqrt) hit a constant term too close to zero to invert.
class SingularJetError : public WarpedError {
 public:
  SingularJetError(const std::string& msg, double v) : WarpedError(msg), value(v) {}
  double value;
};

// Jet operand outside the function's domain (e.g. sqrt of a negative head).
class JetDomainError : public WarpedError {
 public:
  JetDomainError(const std::string& msg, double v) : WarpedError(msg), value(v) {}
  double value;
};

// Operands expanded at different points; mixing them silently would be wrong.
class JetMismatchError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

// A partial beyond the stored truncation order was requested.
class JetOrderError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

class ExprError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

class QuadratureError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

// Point or parameter outside the family's domain (r range, nonpositive warp, ...).
class DomainError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

// Strong convexity violated (Omega/Lambda nonpositive, Randers drift bound, ...).
class ConvexityError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

// Omega or Lambda vanishing within tolerance: fundamental tensor not invertible.
class DegenerateMetricError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

class InvalidPointError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

// A finite-difference stencil could not be fit inside the domain.
class FDStepError : public WarpedError {
 public:
  using WarpedError::WarpedError;
};

}  // namespace warped
