#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace hrvfl {

/// Broad failure categories. The CLI maps each one to its own exit code and
/// reports the name in its error record.
enum class ErrorKind { domain, config, shape, divergence, training, linalg, parse, io };

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-finite input handed to a numerical function.
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};

/// Invalid hyperparameters or configuration values.
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

/// Matrix / vector dimensions that do not line up.
struct ShapeError : Error {
  explicit ShapeError(const std::string& w) : Error(ErrorKind::shape, w) {}
};

/// Data that cannot be trained on (e.g. a single class).
struct TrainingError : Error {
  explicit TrainingError(const std::string& w) : Error(ErrorKind::training, w) {}
};

struct LinalgError : Error {
  explicit LinalgError(const std::string& w) : Error(ErrorKind::linalg, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::io, w) {}
};

/// Malformed input file. `row` and `column` are zero-based; npos when unknown.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& w, std::size_t row = npos, std::size_t column = npos)
      : Error(ErrorKind::parse, w), row_(row), column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// The optimizer produced a non-finite gradient or iterate. Carries the last
/// finite parameter vector and the iteration at which the failure happened.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& w, Eigen::VectorXd last_finite, std::size_t iter)
      : Error(ErrorKind::divergence, w), last_finite_(std::move(last_finite)), iter_(iter) {}
  const Eigen::VectorXd& last_finite() const noexcept { return last_finite_; }
  std::size_t iteration() const noexcept { return iter_; }

 private:
  Eigen::VectorXd last_finite_;
  std::size_t iter_;
};

}  // namespace hrvfl
