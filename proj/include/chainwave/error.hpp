#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainwave {

/// Failure classes reported by the library. The CLI maps each class to its
/// own exit code and prints the name as a machine-parsable prefix.
enum class Errc {
  EmptyInput,
  OddEdgeCount,
  NonPositiveLength,
  DomainError,
  PoleEncountered,
  InvalidRange,
  InsufficientRoots,
  NotARoot,
  IllConditionedEdgeSolve,
  MeshTooCoarse,
  SolverFailure,
  EigSolverFailure,
  WindowOutOfRange,
  NonpositiveEnergy,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by validate_chain; carries the 1-based offending edge index when
/// the failure is tied to a single length.
class ChainError : public Error {
 public:
  ChainError(Errc code, const std::string& message, int index = 0)
      : Error(code, message), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class ConfigError : public Error {
 public:
  ConfigError(Errc code, std::string field, int line, const std::string& message)
      : Error(code, message), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace chainwave
