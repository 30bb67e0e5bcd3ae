#include <doctest.h>

#include <cmath>
#include <functional>

#include "support.hpp"
#include "tjd/centroids.hpp"
#include "tjd/divergences.hpp"

using namespace tjd;

namespace {

WeightedPointSet points1d(std::initializer_list<double> xs, std::vector<double> w = {}) {
  std::vector<Vector> pts;
  for (double x : xs) pts.push_back(scalar(x));
  return w.empty() ? WeightedPointSet::uniform(pts) : WeightedPointSet::weighted(pts, w);
}

// Scaled total Jensen in 1D from the textbook formulas, independent of the library.
double tj_1d(const std::function<double(double)>& f, double alpha, double p, double x) {
  if (p == x) return 0.0;
  const double j = (alpha * f(p) + (1 - alpha) * f(x) - f(alpha * p + (1 - alpha) * x)) / (alpha * (1 - alpha));
  const double s = (f(p) - f(x)) / (p - x);
  return j / std::sqrt(1 + s * s);
}

struct GridMin {
  double x;
  double loss;
};

GridMin grid_oracle(const std::function<double(double)>& f, double alpha, const std::vector<double>& pts,
                    const std::vector<double>& w, double lo, double hi, double step) {
  GridMin best{lo, INFINITY};
  for (double x = lo; x <= hi; x += step) {
    double l = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) l += w[i] * tj_1d(f, alpha, pts[i], x);
    if (l < best.loss) best = {x, l};
  }
  return best;
}

double shannon_f(double x) { return x * std::log(x) - x; }
double burg_f(double x) { return -std::log(x); }

}  // namespace

TEST_CASE("weights are validated and normalized") {
  const auto w = WeightedPointSet::weighted({scalar(1), scalar(2), scalar(3)}, {2, 1, 1});
  CHECK(w.weights == std::vector<double>{0.5, 0.25, 0.25});
  CHECK_THROWS_AS(WeightedPointSet::weighted({scalar(1)}, {-1}), InvalidArgument);
  CHECK_THROWS_AS(WeightedPointSet::weighted({scalar(1), scalar(2)}, {0, 0}), InvalidArgument);
  CHECK_THROWS_AS(total_jensen_centroid(make_builtin("shannon", 1), WeightedPointSet::uniform({})), InvalidArgument);
}

TEST_CASE("CCCP: squared-euclidean midpoint in one step") {
  const Generator g = make_builtin("squared-euclidean", 2);
  Vector a(2), b(2);
  a << 1, 3;
  b << -2, 0.5;
  const CccpResult r = jensen_centroid_cccp(g, 0.5, WeightedPointSet::uniform({a, b}), std::nullopt, 1);
  CHECK((r.center - (a + b) / 2).norm() < 1e-15);
}

TEST_CASE("CCCP: shannon fixed point and grid agreement") {
  const Generator g = make_builtin("shannon", 1);
  const auto data = points1d({1, 4});
  const CccpResult r = jensen_centroid_cccp(g, 0.5, data, std::nullopt, 200);
  const double c = r.center(0);
  const double next = std::exp(0.5 * std::log(0.5 * (1 + c)) + 0.5 * std::log(0.5 * (4 + c)));
  CHECK(std::abs(next - c) < 1e-10);
  double best = 0, best_l = INFINITY;
  for (double x = 1; x <= 4; x += 1e-5) {
    const double l = 0.5 * (jensen_scaled(g, 0.5, scalar(1), scalar(x)).value + jensen_scaled(g, 0.5, scalar(4), scalar(x)).value);
    if (l < best_l) best_l = l, best = x;
  }
  CHECK(std::abs(c - best) < 1e-4);
}

TEST_CASE("CCCP: single point and missing inverse gradient") {
  const Generator g = make_builtin("burg", 1);
  CHECK(jensen_centroid_cccp(g, 0.3, points1d({2.5}), std::nullopt, 5).center(0) == doctest::Approx(2.5));
  const Generator no_inverse("plain", g.domain(), {[g](const Vector& x) { return g.eval(x); }, [g](const Vector& x) { return g.grad(x); }, {}, {}});
  CHECK_THROWS_AS(jensen_centroid_cccp(no_inverse, 0.5, points1d({1, 2}), std::nullopt, 5), InvalidArgument);
}

TEST_CASE("CCCP losses never increase") {
  Rng rng(41);
  Matrix q(2, 2);
  q << 1.5, -0.4, -0.4, 0.8;
  for (const auto& name : {"shannon", "burg", "bit", "squared-euclidean", "squared-mahalanobis"}) {
    const int dim = 2;
    const Generator g = make_builtin(name, dim, std::string(name) == "squared-mahalanobis" ? std::optional<Matrix>(q) : std::nullopt);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Vector> pts;
      std::vector<double> w;
      for (int i = 0; i < 6; ++i) {
        pts.push_back(test::random_point(rng, name, dim));
        w.push_back(rng.uniform(0.1, 1.0));
      }
      const double alpha = rng.uniform(0.1, 0.9);
      const CccpResult r = jensen_centroid_cccp(g, alpha, WeightedPointSet::weighted(pts, w), std::nullopt, 40);
      for (size_t i = 1; i < r.losses.size(); ++i) CHECK(r.losses[i] <= r.losses[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("plain Jensen centroid is translation equivariant for squared-euclidean") {
  const Generator g = make_builtin("squared-euclidean", 2);
  Rng rng(42);
  std::vector<Vector> pts, moved;
  Vector t(2);
  t << 3.5, -1.25;
  for (int i = 0; i < 5; ++i) {
    pts.push_back(test::random_point(rng, "squared-euclidean", 2));
    moved.push_back(pts.back() + t);
  }
  const Vector a = jensen_centroid_cccp(g, 0.3, WeightedPointSet::uniform(pts), std::nullopt, 30).center;
  const Vector b = jensen_centroid_cccp(g, 0.3, WeightedPointSet::uniform(moved), std::nullopt, 30).center;
  CHECK((b - a - t).norm() < 1e-12);
}

TEST_CASE("total Jensen centroid: single point") {
  const Generator g = make_builtin("shannon", 1);
  const CentroidResult r = total_jensen_centroid(g, points1d({3.0}));
  CHECK(r.center(0) == 3.0);
  CHECK(r.iterations == 1);
  CHECK(r.loss_trace.back() == 0.0);
  CHECK(left_sided_centroid(g, points1d({3.0})).center(0) == 3.0);
}

TEST_CASE("total Jensen centroid improves on the barycenter") {
  const Generator g = make_builtin("squared-euclidean", 2);
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vector> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(test::random_point(rng, "squared-euclidean", 2));
    const auto data = WeightedPointSet::uniform(pts);
    const CentroidResult r = total_jensen_centroid(g, data);
    CHECK(total_jensen_loss(g, 0.5, data, r.center) <= total_jensen_loss(g, 0.5, data, data.barycenter()) + 1e-15);
    CHECK(r.loss_trace.front() == doctest::Approx(total_jensen_loss(g, 0.5, data, data.barycenter())));
  }
}

TEST_CASE("total Jensen centroid matches the 1D grid oracle") {
  struct Case {
    const char* name;
    std::function<double(double)> f;
    std::vector<double> pts;
    std::vector<double> w;
  };
  const std::vector<Case> cases = {
      {"shannon", shannon_f, {0.5, 2, 8}, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
      {"shannon", shannon_f, {0.2, 0.9, 1.3, 6}, {0.1, 0.4, 0.3, 0.2}},
      {"burg", burg_f, {0.5, 2, 8}, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
      {"burg", burg_f, {1, 1.5, 4, 9}, {0.25, 0.25, 0.25, 0.25}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const Generator g = make_builtin(c.name, 1);
    std::vector<Vector> pts;
    for (double x : c.pts) pts.push_back(scalar(x));
    const auto data = WeightedPointSet::weighted(pts, c.w);
    const CentroidResult r = total_jensen_centroid(g, data);
    const GridMin m = grid_oracle(c.f, 0.5, c.pts, c.w, c.pts.front(), c.pts.back(), 1e-5);
    CHECK(r.converged);
    CHECK(std::abs(r.center(0) - m.x) < 1e-4);
    CHECK(std::abs(r.loss_trace.back() - m.loss) < 1e-4);
  }
}

TEST_CASE("uncorrected alternation terminates") {
  const Generator g = make_builtin("shannon", 1);
  CentroidConfig cfg;
  cfg.conformal_correction = false;
  const CentroidResult r = total_jensen_centroid(g, points1d({0.5, 2, 8}), cfg);
  CHECK(r.iterations <= cfg.outer_max_iters);
  CHECK(r.loss_trace.size() >= 2);
  for (const auto& w : r.stage_weights_trace) {
    double sum = 0;
    for (double x : w) sum += x;
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("left-sided centroid is the right-sided one for the complementary skew") {
  const Generator g = make_builtin("burg", 1);
  const auto data = points1d({0.5, 1.5, 3, 7});
  CentroidConfig cfg;
  cfg.alpha = 0.5;
  CHECK(left_sided_centroid(g, data, cfg).center == total_jensen_centroid(g, data, cfg).center);
  cfg.alpha = 0.3;
  CentroidConfig flipped = cfg;
  flipped.alpha = 0.7;
  CHECK(left_sided_centroid(g, data, cfg).center == total_jensen_centroid(g, data, flipped).center);
}

TEST_CASE("rho_J gradient matches finite differences") {
  Rng rng(44);
  for (const auto& name : test::kScalarNames) {
    const Generator g = make_builtin(name, 2);
    for (int s = 0; s < 100; ++s) {
      const Vector p = test::random_point(rng, name, 2), x = test::random_point(rng, name, 2);
      const Vector gr = rho_j_gradient(g, p, x);
      for (int i = 0; i < 2; ++i) {
        const double h = 1e-6;
        Vector a = x, b = x;
        a(i) += h;
        b(i) -= h;
        const double fd = (rho_j(g, p, a) - rho_j(g, p, b)) / (2 * h);
        CHECK(std::abs(fd - gr(i)) < 1e-6 * std::max(1.0, std::abs(gr(i))));
      }
    }
    CHECK(rho_j_gradient(g, test::random_point(rng, name, 2), test::random_point(rng, name, 2)).size() == 2);
  }
}
