#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace dflux {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad parameters, unknown keys, inconsistent specs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state outside the admissible set of the model (or a loss of hyperbolicity).
class InadmissibleState : public Error {
 public:
  using Error::Error;
};

/// The flux mapping has no admissible solution for the given input.
class MappingInfeasible : public Error {
 public:
  using Error::Error;
};

/// Failure inside the time integration. Carries the cell and/or RK stage
/// where it happened when known.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what, std::optional<std::size_t> cell = std::nullopt,
                       std::optional<int> stage = std::nullopt)
      : Error(what), cell_(cell), stage_(stage) {}

  std::optional<std::size_t> cell() const { return cell_; }
  std::optional<int> stage() const { return stage_; }

 private:
  std::optional<std::size_t> cell_;
  std::optional<int> stage_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dflux
