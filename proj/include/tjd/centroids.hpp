#pragma once

#include <optional>
#include <vector>

#include "tjd/generators.hpp"

namespace tjd {

/// Points with nonnegative weights normalized to sum to one.
struct WeightedPointSet {
  std::vector<Vector> points;
  std::vector<double> weights;

  static WeightedPointSet uniform(std::vector<Vector> points);
  /// Validates and normalizes `raw_weights`.
  static WeightedPointSet weighted(std::vector<Vector> points, std::vector<double> raw_weights);

  size_t size() const { return points.size(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  Vector barycenter() const;
};

std::vector<double> normalize_weights(std::vector<double> w);

struct CentroidConfig {
  double alpha = 0.5;
  int inner_cccp_iters = 20;
  double outer_tol = 1e-10;
  int outer_max_iters = 1000;
  std::optional<Vector> init;  // barycenter when empty
  /// Adds the gradient of the conformal factor to each CCCP stage so the
  /// fixed point is a stationary point of the total Jensen loss. Without it
  /// the iteration follows the plain reweight/CCCP alternation, whose fixed
  /// point generally differs from the loss minimizer.
  bool conformal_correction = true;
  /// Uncorrected scheme only: stop after this many consecutive loss increases.
  int max_consecutive_increases = 5;
};

struct CentroidResult {
  Vector center;
  std::vector<double> loss_trace;  // L(c^(t); w), starting at the initializer
  std::vector<std::vector<double>> stage_weights_trace;
  bool converged = false;
  int iterations = 0;
  bool clamped = false;  // an iterate had to be pulled back into the domain
};

struct CccpResult {
  Vector center;
  std::vector<double> losses;  // sum_i w_i J_alpha(p_i : c) per iterate, start included
  int iterations = 0;
  bool clamped = false;
};

/// sum_i w_i J_alpha(p_i : x) (scaled skew Jensen).
double jensen_loss(const Generator& g, double alpha, const std::vector<Vector>& points,
                   const std::vector<double>& weights, const Vector& x);

/// L(x; w) = sum_i w_i tJ_alpha(p_i : x).
double total_jensen_loss(const Generator& g, double alpha, const WeightedPointSet& data, const Vector& x);

/// Gradient in x of rho_J(p, x); zero at x == p.
Vector rho_j_gradient(const Generator& g, const Vector& p, const Vector& x);

/// CCCP for the right-sided skew Jensen centroid argmin_x sum_i w_i J_alpha(p_i : x):
///   c <- (grad F)^-1( sum_i w_i grad F(alpha p_i + (1 - alpha) c) ).
/// Runs `iters` steps from `start` (barycenter by default), stopping early
/// once a step moves less than step_tol (relative) when step_tol > 0.
CccpResult jensen_centroid_cccp(const Generator& g, double alpha, const WeightedPointSet& data,
                                const std::optional<std::vector<double>>& weights_override, int iters,
                                double step_tol = 0.0, const std::optional<Vector>& start = std::nullopt);

/// Right-sided total Jensen centroid by alternating conformal reweighting
/// and CCCP stages.
CentroidResult total_jensen_centroid(const Generator& g, const WeightedPointSet& data,
                                     const CentroidConfig& cfg = {});

/// Left-sided centroid: the right-sided one for 1 - alpha.
CentroidResult left_sided_centroid(const Generator& g, const WeightedPointSet& data,
                                   const CentroidConfig& cfg = {});

}  // namespace tjd
