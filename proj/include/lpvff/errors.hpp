#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpvff {

/// Position (or other argument) outside the admissible domain of a model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand sizes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A Cholesky factorization failed; the matrix is not positive definite.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonfiniteStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-loop tracking error grew beyond the configured bound.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two artifacts that must describe the same experiment do not.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text input (config or model file) could not be parsed. Carries the
/// 1-based line number, 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : std::runtime_error(format(source, line, what)),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& what) {
    if (line == 0) return source + ": " + what;
    return source + ":" + std::to_string(line) + ": " + what;
  }

  std::string source_;
  std::size_t line_;
};

}  // namespace lpvff
