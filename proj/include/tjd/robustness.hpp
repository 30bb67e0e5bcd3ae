#pragma once

#include <optional>
#include <vector>

#include "tjd/generators.hpp"

namespace tjd {

/// Influence of an outlier y with mass epsilon on the alpha = 1/2 Jensen
/// centroid of an inlier p.
struct InfluenceQuery {
  Generator generator;
  double p = 1.0;
  double y = 1.0;
  double epsilon = 1e-4;
};

struct InfluenceResult {
  double z_analytic = 0.0;
  double z_empirical = 0.0;
  double centroid = 0.0;  // perturbed centroid x~
};

/// z(y) = 2 (f'((p + y)/2) - f'(p)) / f''(p).
double influence_analytic(const Generator& g, double p, double y);

/// Solves the perturbed centroid with CCCP and returns (x~ - p) / epsilon.
InfluenceResult influence_empirical(const InfluenceQuery& q);

/// Same experiment with the total Jensen centroid (no analytic counterpart).
double total_influence_empirical(const InfluenceQuery& q);

/// Geometric grid from `start` to `stop` inclusive, `per_decade` points per decade.
std::vector<double> geometric_grid(double start, double stop, int per_decade = 40);

struct SweepRow {
  double y = 0.0;
  double z_analytic = 0.0;
  double rho_j = 1.0;
  std::optional<double> z_empirical;
};

enum class InfluenceTrend { kBounded, kUnbounded };

struct BoundednessReport {
  std::vector<SweepRow> rows;
  double sup_abs_z = 0.0;
  /// |z| at the last grid point over |z| one decade earlier.
  double last_decade_growth = 1.0;
  InfluenceTrend trend = InfluenceTrend::kBounded;
  /// rho_J(p, y_max) * log(y_max): tends to 1 for Shannon.
  double rho_log_product = 0.0;
};

/// Evaluates the analytic influence and rho_J(p, y) along y_grid; with
/// `empirical_eps` set, also the CCCP-based influence at every grid point.
BoundednessReport boundedness_sweep(const Generator& g, double p, const std::vector<double>& y_grid,
                                    std::optional<double> empirical_eps = std::nullopt);

}  // namespace tjd
