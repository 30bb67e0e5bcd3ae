#include "tjd/generators.hpp"

#include <cmath>
#include <sstream>

namespace tjd {

std::string to_string(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v(i);
  }
  os << ')';
  return os.str();
}

bool Interval::contains(double x) const {
  if (std::isnan(x)) return false;
  const bool lo = lower_closed ? x >= lower : x > lower;
  const bool hi = upper_closed ? x <= upper : x < upper;
  return lo && hi;
}

bool Interval::interior(double x) const {
  return !std::isnan(x) && x > lower && x < upper;
}

Domain Domain::uniform(Interval iv, int dim) {
  return Domain(std::vector<Interval>(static_cast<size_t>(dim), iv));
}

const Interval& Domain::coord(int i) const { return coords_.at(static_cast<size_t>(i)); }

int Domain::first_violation(const Vector& x, bool need_interior) const {
  for (int i = 0; i < dim(); ++i) {
    const auto& iv = coords_[static_cast<size_t>(i)];
    if (need_interior ? !iv.interior(x(i)) : !iv.contains(x(i))) return i;
  }
  return -1;
}

bool Domain::contains(const Vector& x) const {
  return x.size() == dim() && first_violation(x, false) < 0;
}

bool Domain::interior(const Vector& x) const {
  return x.size() == dim() && first_violation(x, true) < 0;
}

Vector Domain::clamp_interior(const Vector& x, double margin) const {
  Vector out = x;
  for (int i = 0; i < dim(); ++i) {
    const auto& iv = coords_[static_cast<size_t>(i)];
    if (std::isfinite(iv.lower) && !(out(i) > iv.lower)) out(i) = iv.lower + margin;
    if (std::isfinite(iv.upper) && !(out(i) < iv.upper)) out(i) = iv.upper - margin;
  }
  return out;
}

Generator::Generator(std::string name, Domain domain, Callbacks cb) {
  if (!cb.eval || !cb.grad) throw InvalidArgument("generator '" + name + "' needs eval and grad");
  if (domain.dim() < 1) throw InvalidArgument("generator dimension must be >= 1");
  state_ = std::make_shared<const State>(State{std::move(name), std::move(domain), std::move(cb), std::nullopt});
}

Generator Generator::separable(std::string name, ScalarFunctions base, int dim) {
  if (dim < 1) throw InvalidArgument("generator dimension must be >= 1");
  Callbacks cb;
  cb.eval = [f = base.f](const Vector& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += f(x(i));
    return s;
  };
  cb.grad = [df = base.df](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = df(x(i));
    return g;
  };
  if (base.df_inverse) {
    cb.grad_inverse = [inv = base.df_inverse, range = base.gradient_range](const Vector& g) {
      Vector x(g.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (!range.interior(g(i)))
          throw DomainError("gradient value " + std::to_string(g(i)) + " outside the range of grad F");
        x(i) = inv(g(i));
      }
      return x;
    };
  }
  if (base.ddf) {
    cb.hessian = [ddf = base.ddf](const Vector& x) {
      Vector d(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) d(i) = ddf(x(i));
      return Matrix(d.asDiagonal());
    };
  }
  Domain dom = Domain::uniform(base.domain, dim);
  auto st = std::make_shared<State>(State{std::move(name), std::move(dom), std::move(cb), std::move(base)});
  return Generator(std::shared_ptr<const State>(std::move(st)));
}

const ScalarFunctions& Generator::base() const {
  if (!state_->base) throw InvalidArgument("generator '" + name() + "' is not separable");
  return *state_->base;
}

void Generator::check_domain(const Vector& x, bool need_interior) const {
  if (x.size() != dim()) {
    throw InvalidArgument("point of dimension " + std::to_string(x.size()) + " for generator '" + name() +
                          "' of dimension " + std::to_string(dim()));
  }
  const int bad = domain().first_violation(x, need_interior);
  if (bad >= 0) {
    std::ostringstream os;
    os.precision(17);
    os << "coordinate " << bad << " = " << x(bad) << (need_interior ? " not in the interior of" : " outside")
       << " the domain of '" << name() << "'";
    throw DomainError(os.str());
  }
}

double Generator::eval(const Vector& x) const {
  check_domain(x, false);
  return state_->cb.eval(x);
}

Vector Generator::grad(const Vector& x) const {
  check_domain(x, true);
  return state_->cb.grad(x);
}

Vector Generator::grad_inverse(const Vector& g) const {
  if (!has_grad_inverse()) throw InvalidArgument("generator '" + name() + "' has no inverse gradient");
  if (g.size() != dim()) throw InvalidArgument("gradient dimension mismatch");
  return state_->cb.grad_inverse(g);
}

Matrix Generator::hessian(const Vector& x) const {
  if (!has_hessian()) throw InvalidArgument("generator '" + name() + "' has no Hessian");
  check_domain(x, true);
  return state_->cb.hessian(x);
}

double Generator::second_deriv(double x) const {
  if (dim() != 1) throw InvalidArgument("second derivative requires a scalar generator");
  return hessian(scalar(x))(0, 0);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

ScalarFunctions shannon() {
  return {[](double x) { return xlogx(x) - x; },
          [](double x) { return std::log(x); },
          [](double x) { return 1.0 / x; },
          [](double g) { return std::exp(g); },
          Interval{0.0, kInf, true, false},
          Interval{-kInf, kInf}};
}

ScalarFunctions burg() {
  return {[](double x) { return -std::log(x); },
          [](double x) { return -1.0 / x; },
          [](double x) { return 1.0 / (x * x); },
          [](double g) { return -1.0 / g; },
          Interval{0.0, kInf, false, false},
          Interval{-kInf, 0.0}};
}

ScalarFunctions bit() {
  return {[](double x) { return xlogx(x) + xlogx(1.0 - x); },
          [](double x) { return std::log(x / (1.0 - x)); },
          [](double x) { return 1.0 / (x * (1.0 - x)); },
          [](double g) { return 1.0 / (1.0 + std::exp(-g)); },
          Interval{0.0, 1.0, true, true},
          Interval{-kInf, kInf}};
}

ScalarFunctions half_square() {
  return {[](double x) { return 0.5 * x * x; },
          [](double x) { return x; },
          [](double) { return 1.0; },
          [](double g) { return g; },
          Interval{-kInf, kInf},
          Interval{-kInf, kInf}};
}

Generator mahalanobis(const Matrix& q) {
  if (q.rows() != q.cols() || q.rows() < 1) throw InvalidArgument("Mahalanobis matrix must be square");
  if (!q.isApprox(q.transpose(), 1e-12)) throw InvalidArgument("Mahalanobis matrix must be symmetric");
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) throw InvalidArgument("Mahalanobis matrix must be positive-definite");
  const int d = static_cast<int>(q.rows());
  Generator::Callbacks cb;
  cb.eval = [q](const Vector& x) { return 0.5 * x.dot(q * x); };
  cb.grad = [q](const Vector& x) -> Vector { return q * x; };
  cb.grad_inverse = [llt](const Vector& g) -> Vector { return llt.solve(g); };
  cb.hessian = [q](const Vector&) { return q; };
  return Generator("squared-mahalanobis", Domain::uniform(Interval{}, d), std::move(cb));
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"shannon", "burg", "bit", "squared-euclidean", "squared-mahalanobis"};
}

Generator make_builtin(const std::string& name, int dim, const std::optional<Matrix>& matrix) {
  if (dim < 1) throw InvalidArgument("dimension must be >= 1");
  if (name == "squared-mahalanobis") {
    if (!matrix) throw InvalidArgument("squared-mahalanobis requires a matrix");
    if (matrix->rows() != dim) throw InvalidArgument("matrix size does not match dimension");
    return mahalanobis(*matrix);
  }
  if (matrix) throw InvalidArgument("generator '" + name + "' takes no matrix");
  if (name == "shannon") return Generator::separable(name, shannon(), dim);
  if (name == "burg") return Generator::separable(name, burg(), dim);
  if (name == "bit") return Generator::separable(name, bit(), dim);
  if (name == "squared-euclidean") return Generator::separable(name, half_square(), dim);
  throw InvalidArgument("unknown generator '" + name + "'");
}

namespace {

Interval scale_interval(const Interval& iv, double a) {
  // {x : a x in iv}
  Interval out;
  if (a > 0) {
    out = {iv.lower / a, iv.upper / a, iv.lower_closed, iv.upper_closed};
  } else {
    out = {iv.upper / a, iv.lower / a, iv.upper_closed, iv.lower_closed};
  }
  return out;
}

Interval scale_range(const Interval& iv, double a) {
  Interval out = scale_interval(iv, 1.0 / a);  // {a g : g in iv}
  out.lower_closed = out.upper_closed = false;
  return out;
}

}  // namespace

Generator affine_precompose(const Generator& g, double a, double b) {
  if (a == 0.0 || !std::isfinite(a)) throw InvalidArgument("affine scale must be finite and nonzero");
  std::ostringstream nm;
  nm.precision(17);
  nm << "affine(" << g.name() << ", " << a << ", " << b << ")";

  if (g.is_separable()) {
    const ScalarFunctions& fb = g.base();
    const double per = b / g.dim();
    ScalarFunctions s;
    s.f = [f = fb.f, a, per](double x) { return f(a * x) + per; };
    s.df = [df = fb.df, a](double x) { return a * df(a * x); };
    if (fb.ddf) s.ddf = [ddf = fb.ddf, a](double x) { return a * a * ddf(a * x); };
    if (fb.df_inverse) s.df_inverse = [inv = fb.df_inverse, a](double y) { return inv(y / a) / a; };
    s.domain = scale_interval(fb.domain, a);
    s.gradient_range = scale_range(fb.gradient_range, a);
    return Generator::separable(nm.str(), std::move(s), g.dim());
  }

  std::vector<Interval> coords;
  for (int i = 0; i < g.dim(); ++i) coords.push_back(scale_interval(g.domain().coord(i), a));
  Generator::Callbacks cb;
  cb.eval = [g, a, b](const Vector& x) { return g.eval(Vector(a * x)) + b; };
  cb.grad = [g, a](const Vector& x) -> Vector { return a * g.grad(Vector(a * x)); };
  if (g.has_grad_inverse()) cb.grad_inverse = [g, a](const Vector& y) -> Vector { return g.grad_inverse(Vector(y / a)) / a; };
  if (g.has_hessian()) cb.hessian = [g, a](const Vector& x) -> Matrix { return a * a * g.hessian(Vector(a * x)); };
  return Generator(nm.str(), Domain(std::move(coords)), std::move(cb));
}

}  // namespace tjd
