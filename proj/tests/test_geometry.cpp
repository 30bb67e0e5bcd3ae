#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tjd/divergences.hpp"
#include "tjd/geometry.hpp"

using namespace tjd;
using tjd::test::kScalarNames;
using tjd::test::random_point;

namespace {

// Independent 2D oracle: distance from the graph point to the chord line,
// working in the (arc length along p - q, F) plane with q at the origin.
struct Plane {
  double distance;
  double t;  // foot parameter along the chord from q
};

Plane plane_oracle(const Generator& g, double alpha, const Vector& p, const Vector& q) {
  const double len = (p - q).norm();
  const double fq = g.eval(q), fp = g.eval(p);
  const double ax = len, ay = fp - fq;
  const double px = alpha * len, py = g.eval(Vector(alpha * p + (1 - alpha) * q)) - fq;
  const double t = (px * ax + py * ay) / (ax * ax + ay * ay);
  return {std::hypot(px - t * ax, py - t * ay), t};
}

}  // namespace

TEST_CASE("projection of the unit segment under squared-euclidean") {
  const Generator g = make_builtin("squared-euclidean", 1);
  const ProjectionResult r = project_beta(g, 0.5, scalar(0), scalar(1));
  CHECK(r.beta == doctest::Approx(0.55).epsilon(1e-14));
  CHECK(r.distance == doctest::Approx(0.1118033988749895).epsilon(1e-14));
  CHECK(r.foot_abscissa == doctest::Approx(0.55));
  CHECK(r.foot_ordinate == doctest::Approx(0.225));
  CHECK(geometric_oracle_tj(g, 0.5, scalar(0), scalar(1)) == doctest::Approx(0.1118033988749895).epsilon(1e-14));
  CHECK_THROWS_AS(project_beta(g, 0.5, scalar(1), scalar(1)), InvalidArgument);
}

TEST_CASE("projection matches the plane oracle and the conformal product") {
  Rng rng(31);
  bool beta_escapes = false;
  for (const auto& name : kScalarNames) {
    for (int dim : {1, 3}) {
      const Generator g = make_builtin(name, dim);
      for (int s = 0; s < 250; ++s) {
        const double alpha = rng.uniform(0.05, 0.95);
        const Vector p = random_point(rng, name, dim), q = random_point(rng, name, dim);
        const Plane o = plane_oracle(g, alpha, p, q);
        const ProjectionResult r = project_beta(g, alpha, p, q);
        const double product = rho_j(g, p, q) * jensen_raw(g, alpha, p, q).value;
        CHECK(test::rel_err(r.distance, o.distance) < 1e-9);
        CHECK(test::rel_err(geometric_oracle_tj(g, alpha, p, q), product) < 1e-9);
        CHECK(r.pythagoras_residual < 1e-10);
        CHECK(std::abs(r.orthogonality_residual) < 1e-10);

        const ConformalFactors cf = conformal_factors(g, p, q);
        const double len_sq = cf.delta.squaredNorm();
        CHECK(std::abs((alpha - r.beta) - cf.delta_f / (len_sq + cf.delta_f * cf.delta_f) * r.j_raw) < 1e-12);
        CHECK(cf.delta.norm() / std::sqrt(len_sq + cf.delta_f * cf.delta_f) == doctest::Approx(cf.rho_j).epsilon(1e-15));

        const double theta = rng.uniform(0, 2 * M_PI);
        CHECK(std::abs(geometric_oracle_tj(g, alpha, p, q, theta) - geometric_oracle_tj(g, alpha, p, q)) < 1e-12);
        if (r.beta < 0.0 || r.beta > 1.0) beta_escapes = true;
      }
    }
  }
  CHECK(beta_escapes);
}

TEST_CASE("beta outside the unit interval keeps the Pythagorean identity") {
  // The foot falls beyond p.
  const Generator g = make_builtin("shannon", 1);
  const ProjectionResult r = project_beta(g, 0.95, scalar(0.01), scalar(10));
  CHECK(r.beta == doctest::Approx(1.0200655859238736).epsilon(1e-12));
  CHECK(r.pythagoras_residual < 1e-10);
}

TEST_CASE("near-coincident points approach the total bregman factor") {
  const Generator g = make_builtin("shannon", 1);
  const Vector p = scalar(2.0), q = scalar(2.0 + 1e-6);
  const double oracle = geometric_oracle_tj(g, 0.5, p, q);
  CHECK(oracle / (rho_b(g, q) * jensen_raw(g, 0.5, p, q).value) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("second kind: closed form agrees with bisection") {
  const Generator se = make_builtin("squared-euclidean", 1);
  const auto closed = second_kind_alpha_closed_form(se, 0.5, scalar(0), scalar(1));
  REQUIRE(closed.has_value());
  CHECK(std::abs(*closed - second_kind_tj(se, 0.5, scalar(0), scalar(1)).alpha) < 1e-10);

  Rng rng(32);
  for (const auto& name : {"squared-euclidean", "burg"}) {
    const Generator g = make_builtin(name, 1);
    for (int s = 0; s < 200; ++s) {
      const double beta = rng.uniform(0.05, 0.95);
      const Vector p = random_point(rng, name, 1), q = random_point(rng, name, 1);
      const auto c = second_kind_alpha_closed_form(g, beta, p, q);
      REQUIRE(c.has_value());
      CHECK(std::abs(*c - second_kind_tj(g, beta, p, q).alpha) < 1e-10);
    }
  }
}

TEST_CASE("second kind: the graph point is orthogonal to the chord") {
  const Generator g = make_builtin("shannon", 1);
  const Vector p = scalar(1), q = scalar(4);
  const double beta = 0.3;
  const SecondKindResult r = second_kind_tj(g, beta, p, q);
  const double len = 3.0, df = g.eval(p) - g.eval(q);
  const double gx = (r.alpha - beta) * (-len), gy = g.eval(Vector(q + r.alpha * (p - q))) - (g.eval(q) + beta * df);
  CHECK(std::abs(gx * (-len) + gy * df) < 1e-12);
}

TEST_CASE("second kind: edge cases") {
  const Generator g = make_builtin("shannon", 1);
  CHECK(second_kind_tj(g, 0.5, scalar(1.0), scalar(1.0 + 1e-9)).value < 1e-8);
  CHECK_THROWS_AS(second_kind_tj(g, 0.0, scalar(1), scalar(2)), InvalidArgument);
  CHECK_THROWS_AS(second_kind_tj(g, 1.2, scalar(1), scalar(2)), InvalidArgument);
  CHECK_FALSE(second_kind_alpha_closed_form(g, 0.5, scalar(1), scalar(2)).has_value());
}

TEST_CASE("second kind does not reduce to the first kind for small skew") {
  const Generator g = make_builtin("shannon", 1);
  const Vector p = scalar(1), q = scalar(4);
  const double small = 1e-4;
  const double first = total_jensen(g, small, p, q).value;
  const double second = second_kind_tj(g, small, p, q).value;
  CHECK(std::abs(first - second) > 1e-3);
}
