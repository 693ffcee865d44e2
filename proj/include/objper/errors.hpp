#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace objper {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, or a point handed to a space of another type.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A point violates the invariants of its type (norm, monotonicity, ...).
class InvalidPointError : public Error {
 public:
  using Error::Error;
};

/// A compositional vector with negative entries or a sum away from 1.
class InvalidCompositionError : public Error {
 public:
  using Error::Error;
};

/// An adjacency matrix that is asymmetric, negative, or has nonzero diagonal.
class InvalidAdjacencyError : public Error {
 public:
  using Error::Error;
};

/// Weights that sum to zero (or contain negatives).
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

/// Configurations where the Frechet mean is not identifiable
/// (e.g. antipodal sphere data with extrinsic mean at the origin).
class DegenerateConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to reach the requested tolerance.
/// Carries the last iterate (flattened coordinates), the objective value
/// there, and the remaining tangent-gradient norm as the optimality gap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate,
                   double objective, double gradient_norm)
      : Error(what),
        last_iterate(std::move(last_iterate)),
        objective(objective),
        gradient_norm(gradient_norm) {}

  Eigen::VectorXd last_iterate;
  double objective = 0.0;
  double gradient_norm = 0.0;
  // Candidate context, filled when the failure happens inside a scan.
  int theta = -1;
  int phase = -1;
};

/// Regularizer g(T) undefined because T / theta_max <= 1.
class InvalidRegularizerError : public Error {
 public:
  using Error::Error;
};

/// log-RSS information criterion requested with RSS exactly zero.
class ZeroRSSError : public Error {
 public:
  using Error::Error;
};

/// A row of an input file failed to parse.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row) : Error(what), row(row) {}
  explicit ParseError(const std::string& what) : Error(what), row(0) {}
  std::size_t row = 0;
};

/// Parsed data violates a documented invariant, or arguments are out of range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace objper
