#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linepack {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  explicit RankDeficient(double sigma_min)
      : Error("configuration is rank deficient (smallest singular value " +
              std::to_string(sigma_min) + ")"),
        sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

class NotTight : public Error {
 public:
  explicit NotTight(double residual)
      : Error("configuration is not a tight frame (residual " +
              std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class LpInfeasible : public Error {
 public:
  using Error::Error;
};

class LpUnbounded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse error on line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TokenCountMismatch : public Error {
 public:
  TokenCountMismatch(std::size_t expected, std::size_t got)
      : Error("expected " + std::to_string(expected) + " scalars, got " + std::to_string(got)),
        expected_(expected),
        got_(got) {}
  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

class NormViolation : public Error {
 public:
  NormViolation(std::size_t column, double norm)
      : Error("column " + std::to_string(column) + " has norm " + std::to_string(norm) +
              ", not within tolerance of 1"),
        column_(column),
        norm_(norm) {}
  std::size_t column() const noexcept { return column_; }
  double norm() const noexcept { return norm_; }

 private:
  std::size_t column_;
  double norm_;
};

class NetworkError : public Error {
 public:
  NetworkError(int status, const std::string& what)
      : Error("network error (status " + std::to_string(status) + "): " + what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace linepack
