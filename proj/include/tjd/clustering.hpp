#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tjd/centroids.hpp"
#include "tjd/generators.hpp"
#include "tjd/rng.hpp"

namespace tjd {

struct SeedingConfig {
  int k = 2;
  double alpha = 0.5;
  uint64_t rng_seed = 0;
  int trials = 1;
};

struct Seeding {
  std::vector<size_t> indices;  // rows of the data, in pick order
  std::vector<Vector> centers;
};

/// Total Jensen seeding: first center uniform, then each next one drawn
/// without replacement (by index) with probability proportional to
/// min_{c in C} tJ_alpha(x : c). Uses stream `stream` of cfg.rng_seed.
Seeding seed(const Generator& g, const std::vector<Vector>& data, const SeedingConfig& cfg, uint64_t stream = 0);

/// Exact probability that each point is picked as the second center.
std::vector<double> second_center_distribution(const Generator& g, double alpha, const std::vector<Vector>& data);

/// sum_x min_c tJ_alpha(x : c).
double potential(const Generator& g, double alpha, const std::vector<Vector>& data, const std::vector<Vector>& centers);

/// Per-round bookkeeping of the Lloyd loop.
struct LloydRound {
  double potential_before_assignment = 0.0;  // old assignment, current centers
  double potential_after_assignment = 0.0;
  bool assignments_changed = false;
};

struct ClusterModel {
  std::vector<Vector> centers;
  std::vector<size_t> center_indices;  // data rows, when centers are data points
  std::vector<size_t> assignments;
  double potential = 0.0;
  std::vector<LloydRound> rounds;
  int empty_cluster_repairs = 0;
};

/// Assigns every point to its argmin center (ties to the lowest index).
ClusterModel assign(const Generator& g, double alpha, const std::vector<Vector>& data, const std::vector<Vector>& centers);

/// Exhaustive minimum of the potential over all k-subsets of the data.
ClusterModel brute_force_discrete_optimum(const Generator& g, double alpha, const std::vector<Vector>& data, int k,
                                          uint64_t budget = 1000000);

/// Seeded Lloyd iterations with total Jensen centroid updates. Empty clusters
/// are re-seeded on the point farthest from its center.
ClusterModel lloyd_cluster(const Generator& g, const std::vector<Vector>& data, const SeedingConfig& cfg,
                           const CentroidConfig& centroid_cfg, int max_rounds = 100);

/// Assumption-H constants estimated over the convex closure of the data.
struct BoundConstants {
  double k1_hat = 1.0;         // sup of the pointwise Hessian condition number
  double k1_global_hat = 1.0;  // sup lambda_max over inf lambda_min across points
  double k2_hat = 0.0;         // sup of Delta_F^2 / <Delta, Delta>
  double rho_min = 1.0;
  double rho_max = 1.0;
  bool bounded = true;
  std::optional<Vector> offending_point;
  bool rho_exact = false;  // extremes from per-coordinate intervals, not sampling
  bool k2_exact = false;

  double u_hat(double epsilon) const;
  double v_hat(double epsilon) const;
  /// 2 U^2 (1 + V) (2 + log k).
  double seeding_multiplier(double epsilon, int k) const;
};

BoundConstants estimate_bound_constants(const Generator& g, const std::vector<Vector>& data, int samples,
                                        uint64_t rng_seed = 0);

/// Random point of the convex hull of `data` (normalized exponential weights).
Vector sample_convex_closure(const std::vector<Vector>& data, Rng& rng);

struct InequalitySurrogates {
  double triangle_sup = 0.0;   // sup tJ(p:r) / (tJ(p:q) + tJ(q:r))
  double symmetric_sup = 0.0;  // sup tJ(x:z) / tJ(z:x)
  int samples = 0;
};

InequalitySurrogates inequality_surrogates(const Generator& g, double alpha, const std::vector<Vector>& data,
                                           int samples, uint64_t rng_seed);

struct SeedingExperiment {
  double mean_potential = 0.0;
  double optimal_potential = 0.0;
  double ratio = 0.0;
  double epsilon = 0.5;
  double multiplier = 0.0;  // 2 U^2 (1 + V) (2 + log k) at epsilon
  bool multiplier_finite = false;
  bool bound_holds = true;
  BoundConstants constants;
  std::vector<size_t> optimal_indices;
  std::vector<double> trial_potentials;
};

/// Averages `cfg.trials` independent seedings (stream t for trial t) and
/// compares the mean potential to the discrete optimum and the plug-in bound.
SeedingExperiment seeding_bound_experiment(const Generator& g, const std::vector<Vector>& data,
                                           const SeedingConfig& cfg, double epsilon, int constant_samples = 10000);

}  // namespace tjd
