/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by every incluso module.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace incluso {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonSquareMatrix : public Error {
 public:
  using Error::Error;
};

/// Evaluation left the domain of an operation (e.g. division by an interval containing zero).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public DomainError {
 public:
  DivisionByZeroInterval() : DomainError("division by an interval containing zero") {}
};

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SingularBasis : public Error {
 public:
  using Error::Error;
};

// Failures of a single integration step. The driver that owns the step loop
// stamps the step index so diagnostics can name it.
class IntegrationError : public Error {
 public:
  IntegrationError(std::string reason, double step_size)
      : Error(reason), reason_(std::move(reason)), step_size_(step_size) {
    rebuild();
  }

  [[nodiscard]] const char* what() const noexcept override { return message_.c_str(); }
  [[nodiscard]] double step_size() const noexcept { return step_size_; }
  [[nodiscard]] std::optional<std::size_t> step_index() const noexcept { return step_index_; }

  void set_step_index(std::size_t k) {
    step_index_ = k;
    rebuild();
  }

 private:
  void rebuild() {
    message_ = reason_ + " (h=" + std::to_string(step_size_);
    if (step_index_) {
      message_ += ", step " + std::to_string(*step_index_);
    }
    message_ += ")";
  }

  std::string reason_;
  double step_size_;
  std::optional<std::size_t> step_index_;
  std::string message_;
};

/// The a-priori enclosure could not be validated; the step size is too large.
class RoughEnclosureFailure : public IntegrationError {
 public:
  RoughEnclosureFailure(double step_size, int retries)
      : IntegrationError("rough enclosure failed after " + std::to_string(retries) + " inflations",
                         step_size) {}
};

/// No admissible truncation depth exists for the exp-integral series.
class SeriesDivergence : public IntegrationError {
 public:
  SeriesDivergence(double step_size, double norm)
      : IntegrationError("exp-integral series does not converge (||J h|| = " + std::to_string(norm) + ")",
                         step_size) {}
};

class NoCrossing : public Error {
 public:
  using Error::Error;
};

class NonTransversal : public Error {
 public:
  using Error::Error;
};

}  // namespace incluso
