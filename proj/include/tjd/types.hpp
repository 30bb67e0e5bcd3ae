#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tjd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Input lies outside a generator's domain, or a formula diverges there.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed arguments: unknown names, mismatched sizes, bad parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative procedure failed to produce a usable answer.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scalar convenience: a length-1 vector.
inline Vector scalar(double x) {
  Vector v(1);
  v(0) = x;
  return v;
}

std::string to_string(const Vector& v);

}  // namespace tjd
