#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace modalfit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Index outside the valid range of a container or parameter set.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Invalid input data (bad mesh, bad box, bad material, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot was not strictly positive.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(std::ptrdiff_t pivot, double value)
      : Error("matrix is not positive definite: pivot at index " + std::to_string(pivot) +
              " is " + std::to_string(value)),
        pivot_(pivot) {}

  /// Pivot index in the original (unpermuted) numbering.
  std::ptrdiff_t pivot() const { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

/// Two targeted eigenvalues are too close for eigenvalue derivatives to be defined.
class ClusteredEigenvalues : public Error {
 public:
  ClusteredEigenvalues(std::ptrdiff_t index, double relative_gap)
      : Error("clustered eigenvalues: relative gap " + std::to_string(relative_gap) +
              " between eigenvalues " + std::to_string(index) + " and " +
              std::to_string(index + 1)),
        index_(index) {}

  std::ptrdiff_t index() const { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// The reduced model cannot be evaluated this far from its expansion point.
class SurrogateOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Shift-invert Lanczos failed; carries the best eigenvalue estimates available.
class LanczosError : public Error {
 public:
  enum class Kind { SubspaceExhausted, MaxIterations };

  LanczosError(Kind kind, const std::string& what, Eigen::VectorXd best_estimates)
      : Error(what), kind_(kind), best_(std::move(best_estimates)) {}

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& best_estimates() const { return best_; }

 private:
  Kind kind_;
  Eigen::VectorXd best_;
};

/// Malformed run configuration; the message names the offending field or line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace modalfit
