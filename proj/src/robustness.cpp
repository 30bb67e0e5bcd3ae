#include "tjd/robustness.hpp"

#include <cmath>

#include "tjd/centroids.hpp"
#include "tjd/divergences.hpp"
#include "tjd/parallel.hpp"

namespace tjd {

namespace {

void check_scalar(const Generator& g) {
  if (!g.is_scalar()) throw InvalidArgument("influence analysis requires a scalar generator");
}

// Unbounded when the last decade still adds more than this fraction of sup|z|.
constexpr double kFlatFraction = 0.01;

WeightedPointSet perturbed_pair(const InfluenceQuery& q) {
  if (!(q.epsilon > 0.0 && q.epsilon < 0.5)) throw InvalidArgument("epsilon must lie in (0, 0.5)");
  return WeightedPointSet::weighted({scalar(q.p), scalar(q.y)}, {1.0 / (1.0 + q.epsilon), q.epsilon / (1.0 + q.epsilon)});
}

}  // namespace

double influence_analytic(const Generator& g, double p, double y) {
  check_scalar(g);
  g.check_domain(scalar(p), true);
  g.check_domain(scalar(y), false);
  if (y == p) return 0.0;
  const double curvature = g.second_deriv(p);
  if (!(curvature > 0.0) || !std::isfinite(curvature)) throw DomainError("f'' must be positive and finite at p");
  return 2.0 * (g.grad(0.5 * (p + y)) - g.grad(p)) / curvature;
}

InfluenceResult influence_empirical(const InfluenceQuery& q) {
  check_scalar(q.generator);
  InfluenceResult r;
  r.z_analytic = influence_analytic(q.generator, q.p, q.y);
  const WeightedPointSet data = perturbed_pair(q);
  const CccpResult c = jensen_centroid_cccp(q.generator, 0.5, data, std::nullopt, 500, 1e-14, scalar(q.p));
  if (c.clamped) throw ConvergenceError("perturbed centroid left the domain");
  r.centroid = c.center(0);
  r.z_empirical = (r.centroid - q.p) / q.epsilon;
  return r;
}

double total_influence_empirical(const InfluenceQuery& q) {
  check_scalar(q.generator);
  const WeightedPointSet data = perturbed_pair(q);
  CentroidConfig cfg;
  cfg.alpha = 0.5;
  cfg.outer_tol = 1e-15;
  cfg.init = scalar(q.p);
  const CentroidResult c = total_jensen_centroid(q.generator, data, cfg);
  return (c.center(0) - q.p) / q.epsilon;
}

std::vector<double> geometric_grid(double start, double stop, int per_decade) {
  if (!(start > 0.0) || !(stop >= start) || per_decade < 1) throw InvalidArgument("invalid geometric grid");
  std::vector<double> grid;
  const double decades = std::log10(stop / start);
  const int steps = static_cast<int>(std::ceil(decades * per_decade - 1e-9));
  for (int i = 0; i <= steps; ++i) grid.push_back(std::min(stop, start * std::pow(10.0, static_cast<double>(i) / per_decade)));
  return grid;
}

BoundednessReport boundedness_sweep(const Generator& g, double p, const std::vector<double>& y_grid,
                                    std::optional<double> empirical_eps) {
  check_scalar(g);
  if (y_grid.empty()) throw InvalidArgument("empty sweep grid");
  for (double y : y_grid) g.check_domain(scalar(y), false);

  BoundednessReport rep;
  rep.rows.resize(y_grid.size());
  parallel_for(y_grid.size(), [&](size_t i) {
    SweepRow& row = rep.rows[i];
    row.y = y_grid[i];
    row.z_analytic = influence_analytic(g, p, row.y);
    row.rho_j = rho_j(g, scalar(p), scalar(row.y));
    if (empirical_eps) row.z_empirical = influence_empirical({g, p, row.y, *empirical_eps}).z_empirical;
  });

  for (const auto& row : rep.rows) rep.sup_abs_z = std::max(rep.sup_abs_z, std::abs(row.z_analytic));
  const double y_last = rep.rows.back().y;
  const double z_last = std::abs(rep.rows.back().z_analytic);
  // Row closest to one decade below the last grid point.
  size_t earlier = 0;
  for (size_t i = 0; i < rep.rows.size(); ++i)
    if (rep.rows[i].y <= y_last / 10.0) earlier = i;
  const double z_earlier = std::abs(rep.rows[earlier].z_analytic);
  rep.last_decade_growth = z_earlier > 0.0 ? z_last / z_earlier : INFINITY;
  const bool flat = rep.sup_abs_z == 0.0 || (z_last - z_earlier) <= kFlatFraction * rep.sup_abs_z;
  rep.trend = flat ? InfluenceTrend::kBounded : InfluenceTrend::kUnbounded;
  rep.rho_log_product = rep.rows.back().rho_j * std::log(y_last);
  return rep;
}

}  // namespace tjd
