#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tjd/types.hpp"

namespace tjd {

/// Per-coordinate interval. A closed end admits evaluation of F (limit
/// value) but never of the gradient.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool lower_closed = false;
  bool upper_closed = false;

  bool contains(double x) const;
  bool interior(double x) const;
};

/// Box domain: one interval per coordinate (or a single interval broadcast).
class Domain {
 public:
  Domain() = default;
  explicit Domain(std::vector<Interval> coords) : coords_(std::move(coords)) {}
  static Domain uniform(Interval iv, int dim);

  const Interval& coord(int i) const;
  int dim() const { return static_cast<int>(coords_.size()); }

  bool contains(const Vector& x) const;
  bool interior(const Vector& x) const;
  /// Index of the first coordinate violating membership, or -1.
  int first_violation(const Vector& x, bool need_interior) const;
  /// Moves x into the interior, `margin` away from any finite end.
  Vector clamp_interior(const Vector& x, double margin) const;

 private:
  std::vector<Interval> coords_;
};

/// Univariate strictly convex function with its derivatives.
struct ScalarFunctions {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;
  std::function<double(double)> df_inverse;  // may be empty
  Interval domain;
  /// Open interval of df's range; grad_inverse is defined on it.
  Interval gradient_range;
};

/// Convex generator F with gradient, optional inverse gradient and Hessian.
/// Immutable after construction and cheap to copy.
class Generator {
 public:
  struct Callbacks {
    std::function<double(const Vector&)> eval;
    std::function<Vector(const Vector&)> grad;
    std::function<Vector(const Vector&)> grad_inverse;  // optional
    std::function<Matrix(const Vector&)> hessian;       // optional
  };

  Generator(std::string name, Domain domain, Callbacks cb);

  /// Separable F(x) = sum_i f(x_i) built from a scalar base.
  static Generator separable(std::string name, ScalarFunctions base, int dim);

  const std::string& name() const { return state_->name; }
  int dim() const { return state_->domain.dim(); }
  const Domain& domain() const { return state_->domain; }

  bool has_grad_inverse() const { return static_cast<bool>(state_->cb.grad_inverse); }
  bool has_hessian() const { return static_cast<bool>(state_->cb.hessian); }
  bool is_separable() const { return state_->base.has_value(); }
  bool is_scalar() const { return dim() == 1 && is_separable(); }
  /// Scalar base of a separable generator (throws otherwise).
  const ScalarFunctions& base() const;

  double eval(const Vector& x) const;
  Vector grad(const Vector& x) const;
  Vector grad_inverse(const Vector& g) const;
  Matrix hessian(const Vector& x) const;
  /// f''(x) for scalar generators.
  double second_deriv(double x) const;

  double eval(double x) const { return eval(scalar(x)); }
  double grad(double x) const { return grad(scalar(x))(0); }

  /// Throws DomainError naming the coordinate when x is not admissible.
  void check_domain(const Vector& x, bool need_interior) const;

 private:
  struct State {
    std::string name;
    Domain domain;
    Callbacks cb;
    std::optional<ScalarFunctions> base;
  };
  std::shared_ptr<const State> state_;

  explicit Generator(std::shared_ptr<const State> s) : state_(std::move(s)) {}
};

/// Built-in names: shannon, burg, bit, squared-euclidean, squared-mahalanobis.
Generator make_builtin(const std::string& name, int dim,
                       const std::optional<Matrix>& matrix = std::nullopt);

std::vector<std::string> builtin_names();

/// G(x) = F(a x) + b.
Generator affine_precompose(const Generator& g, double a, double b);

}  // namespace tjd
