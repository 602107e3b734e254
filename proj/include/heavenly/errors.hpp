#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heavenly {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside a field's domain (log/sqrt of non-positive, zero divisor, stencil leaving domain).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Arithmetic on jets of mismatched order or variable count.
class MismatchError : public Error {
 public:
  using Error::Error;
};

// A derivative was requested beyond what a field can deliver.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// A constructed object failed its residual certification.
class CertificationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, double best_residual, std::vector<double> best_iterate = {})
      : Error(msg), best_residual_(best_residual), best_iterate_(std::move(best_iterate)) {}
  double best_residual() const { return best_residual_; }
  // Iterate with the smallest residual seen; empty when not applicable.
  const std::vector<double>& best_iterate() const { return best_iterate_; }

 private:
  double best_residual_;
  std::vector<double> best_iterate_;
};

class SingularError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& msg, double partial, double error_estimate)
      : Error(msg), partial_(partial), error_estimate_(error_estimate) {}
  double partial() const { return partial_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

// A gradient pair that is not the gradient of any function.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line = 0, int column = 0, std::string pointer = "")
      : Error(msg), line_(line), column_(column), pointer_(std::move(pointer)) {}
  int line() const { return line_; }
  int column() const { return column_; }
  // JSON pointer of the offending entry, when known.
  const std::string& pointer() const { return pointer_; }

 private:
  int line_;
  int column_;
  std::string pointer_;
};

}  // namespace heavenly
