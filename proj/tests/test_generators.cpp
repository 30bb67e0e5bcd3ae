#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tjd/generators.hpp"

using namespace tjd;
using tjd::test::kScalarNames;

TEST_CASE("builtin spot values") {
  CHECK(make_builtin("shannon", 1).eval(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(make_builtin("burg", 1).grad(2.0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(make_builtin("shannon", 1).grad_inverse(scalar(0.0))(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(make_builtin("bit", 1).grad_inverse(scalar(0.0))(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("boundary convention: value at 0 is the limit, gradient throws") {
  const Generator sh = make_builtin("shannon", 2);
  Vector v(2);
  v << 0.0, 1.0;
  CHECK(sh.eval(v) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(sh.grad(v), DomainError);
  const Generator bit = make_builtin("bit", 1);
  CHECK(bit.eval(0.0) == 0.0);
  CHECK(bit.eval(1.0) == 0.0);
  CHECK_THROWS_AS(bit.grad(1.0), DomainError);
  CHECK_THROWS_AS(make_builtin("burg", 1).eval(0.0), DomainError);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(make_builtin("nope", 1), InvalidArgument);
  CHECK_THROWS_AS(make_builtin("shannon", 0), InvalidArgument);
  Matrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS(make_builtin("squared-mahalanobis", 2, indefinite));
  CHECK_THROWS(make_builtin("squared-mahalanobis", 2));
  CHECK_THROWS_AS(affine_precompose(make_builtin("shannon", 1), 0.0, 1.0), InvalidArgument);
}

TEST_CASE("gradient matches central differences") {
  Rng rng(11);
  std::vector<std::string> names = kScalarNames;
  for (const auto& name : names) {
    const Generator g = make_builtin(name, 3);
    for (int s = 0; s < 1000; ++s) {
      const Vector x = test::random_point(rng, name, 3);
      const Vector gr = g.grad(x);
      for (int i = 0; i < 3; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
        Vector a = x, b = x;
        a(i) += h;
        b(i) -= h;
        const double fd = (g.eval(a) - g.eval(b)) / (2 * h);
        CHECK(std::abs(fd - gr(i)) <= 1e-6 * std::max(1.0, std::abs(gr(i))));
      }
    }
  }
}

TEST_CASE("grad_inverse inverts grad") {
  Rng rng(12);
  Matrix q(2, 2);
  q << 2.0, 0.3, 0.3, 1.0;
  for (const auto& name : {"shannon", "burg", "bit", "squared-euclidean", "squared-mahalanobis"}) {
    const Generator g = make_builtin(name, 2, std::string(name) == "squared-mahalanobis" ? std::optional<Matrix>(q) : std::nullopt);
    REQUIRE(g.has_grad_inverse());
    for (int s = 0; s < 1000; ++s) {
      const Vector x = test::random_point(rng, name, 2);
      CHECK((g.grad_inverse(g.grad(x)) - x).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("strict midpoint convexity") {
  Rng rng(13);
  for (const auto& name : kScalarNames) {
    const Generator g = make_builtin(name, 2);
    for (int s = 0; s < 500; ++s) {
      const Vector x = test::random_point(rng, name, 2), y = test::random_point(rng, name, 2);
      CHECK(g.eval(Vector((x + y) / 2)) - (g.eval(x) + g.eval(y)) / 2 < 0.0);
    }
  }
}

TEST_CASE("separable eval is the left-to-right sum of base evals") {
  Rng rng(14);
  const Generator g = make_builtin("shannon", 4);
  for (int s = 0; s < 100; ++s) {
    const Vector x = test::random_point(rng, "shannon", 4);
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) sum += g.base().f(x(i));
    CHECK(g.eval(x) == sum);
    for (int i = 0; i < 4; ++i) CHECK(g.grad(x)(i) == g.base().df(x(i)));
  }
}

TEST_CASE("mahalanobis value, gradient and hessian") {
  Matrix q(2, 2);
  q << 2.0, 0.5, 0.5, 1.0;
  const Generator g = make_builtin("squared-mahalanobis", 2, q);
  Vector x(2);
  x << 1.0, -2.0;
  CHECK(g.eval(x) == doctest::Approx(0.5 * x.dot(q * x)));
  CHECK((g.grad(x) - q * x).norm() < 1e-15);
  CHECK((g.hessian(x) - q).norm() < 1e-15);
}

TEST_CASE("affine precomposition") {
  const Generator sh = make_builtin("shannon", 1);
  const Generator id = affine_precompose(sh, 1.0, 0.0);
  for (double x : {0.1, 1.0, 3.7}) {
    CHECK(id.eval(x) == sh.eval(x));
    CHECK(id.grad(x) == sh.grad(x));
  }
  CHECK(affine_precompose(make_builtin("squared-euclidean", 1), 2.0, 0.0).second_deriv(0.7) == doctest::Approx(4.0));
  CHECK(affine_precompose(make_builtin("burg", 1), 2.0, 1.0).eval(1.0) == doctest::Approx(1.0 - std::log(2.0)));
}

TEST_CASE("hessian and second derivative agree with differences of grad") {
  for (const auto& name : kScalarNames) {
    const Generator g = make_builtin(name, 1);
    const double x = name == "bit" ? 0.3 : 1.7;
    const double h = 1e-6;
    const double fd = (g.grad(x + h) - g.grad(x - h)) / (2 * h);
    CHECK(g.second_deriv(x) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(g.hessian(scalar(x))(0, 0) == doctest::Approx(g.second_deriv(x)));
  }
}
