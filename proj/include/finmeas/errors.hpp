#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace finmeas {

/// Malformed or inconsistent input: width mismatch, empty family, bad range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closure or materialization would exceed the configured element cap.
class CapExceeded : public InputError {
 public:
  using InputError::InputError;
};

/// Instance-file diagnostic with a 1-based line number (0 when unknown).
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : InputError(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A leveled decomposition does not satisfy a condition some construction
/// needs. Names the offending level and, when there is one, the member index.
class DecompositionFailure : public std::runtime_error {
 public:
  DecompositionFailure(std::size_t level, std::optional<std::size_t> member, const std::string& what)
      : std::runtime_error(what), level_(level), member_(member) {}

  std::size_t level() const noexcept { return level_; }
  std::optional<std::size_t> member() const noexcept { return member_; }

 private:
  std::size_t level_;
  std::optional<std::size_t> member_;
};

}  // namespace finmeas
