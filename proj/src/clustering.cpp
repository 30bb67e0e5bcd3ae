#include "tjd/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tjd/divergences.hpp"
#include "tjd/parallel.hpp"

namespace tjd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_points(const Generator& g, const std::vector<Vector>& data) {
  if (data.empty()) throw InvalidArgument("empty data set");
  for (size_t i = 0; i < data.size(); ++i) {
    try {
      g.check_domain(data[i], false);
    } catch (const DomainError& e) {
      throw DomainError("row " + std::to_string(i) + ": " + e.what());
    }
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
}

double tj(const Generator& g, double alpha, const Vector& x, const Vector& c) {
  return total_jensen(g, alpha, x, c).value;
}

// Index of the first unchosen entry whose cumulative weight exceeds u * total.
size_t draw_weighted(const std::vector<double>& w, const std::vector<bool>& chosen, Rng& rng) {
  double total = 0.0;
  size_t remaining = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (chosen[i]) continue;
    total += w[i];
    ++remaining;
  }
  if (!(total > 0.0)) {
    uint64_t pick = rng.index(remaining);
    for (size_t i = 0; i < w.size(); ++i) {
      if (chosen[i]) continue;
      if (pick-- == 0) return i;
    }
  }
  const double target = rng.uniform() * total;
  double acc = 0.0;
  size_t last = w.size();
  for (size_t i = 0; i < w.size(); ++i) {
    if (chosen[i] || w[i] <= 0.0) continue;
    acc += w[i];
    last = i;
    if (acc > target) return i;
  }
  return last;
}

}  // namespace

Seeding seed(const Generator& g, const std::vector<Vector>& data, const SeedingConfig& cfg, uint64_t stream) {
  check_points(g, data);
  check_alpha(cfg.alpha);
  if (cfg.k < 1 || static_cast<size_t>(cfg.k) > data.size())
    throw InvalidArgument("k must satisfy 1 <= k <= n (n = " + std::to_string(data.size()) + ")");

  Rng rng(cfg.rng_seed, stream);
  const size_t n = data.size();
  std::vector<double> mindist(n, kInf);
  std::vector<bool> chosen(n, false);
  Seeding s;
  size_t pick = rng.index(n);
  for (int c = 0; c < cfg.k; ++c) {
    if (c > 0) pick = draw_weighted(mindist, chosen, rng);
    chosen[pick] = true;
    s.indices.push_back(pick);
    s.centers.push_back(data[pick]);
    if (c + 1 == cfg.k) break;
    for (size_t i = 0; i < n; ++i) {
      if (chosen[i]) continue;
      mindist[i] = std::min(mindist[i], tj(g, cfg.alpha, data[i], data[pick]));
    }
  }
  return s;
}

std::vector<double> second_center_distribution(const Generator& g, double alpha, const std::vector<Vector>& data) {
  check_points(g, data);
  check_alpha(alpha);
  const size_t n = data.size();
  if (n < 2) throw InvalidArgument("need at least two points");
  std::vector<double> prob(n, 0.0);
  for (size_t first = 0; first < n; ++first) {
    std::vector<double> d(n, 0.0);
    double total = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (j == first) continue;
      d[j] = tj(g, alpha, data[j], data[first]);
      total += d[j];
    }
    for (size_t j = 0; j < n; ++j) {
      if (j == first) continue;
      const double cond = total > 0.0 ? d[j] / total : 1.0 / static_cast<double>(n - 1);
      prob[j] += cond / static_cast<double>(n);
    }
  }
  return prob;
}

double potential(const Generator& g, double alpha, const std::vector<Vector>& data, const std::vector<Vector>& centers) {
  if (centers.empty()) throw InvalidArgument("potential needs at least one center");
  check_alpha(alpha);
  double total = 0.0;
  for (const auto& x : data) {
    double best = kInf;
    for (const auto& c : centers) best = std::min(best, tj(g, alpha, x, c));
    total += best;
  }
  return total;
}

ClusterModel assign(const Generator& g, double alpha, const std::vector<Vector>& data, const std::vector<Vector>& centers) {
  if (centers.empty()) throw InvalidArgument("assignment needs at least one center");
  ClusterModel m;
  m.centers = centers;
  m.assignments.resize(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    double best = kInf;
    size_t arg = 0;
    for (size_t j = 0; j < centers.size(); ++j) {
      const double d = tj(g, alpha, data[i], centers[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    m.assignments[i] = arg;
    m.potential += best;
  }
  return m;
}

ClusterModel brute_force_discrete_optimum(const Generator& g, double alpha, const std::vector<Vector>& data, int k,
                                          uint64_t budget) {
  check_points(g, data);
  check_alpha(alpha);
  const size_t n = data.size();
  if (k < 1 || static_cast<size_t>(k) > n) throw InvalidArgument("k must satisfy 1 <= k <= n");
  // C(n, k) with early exit once the budget is exceeded.
  double combos = 1.0;
  for (int i = 0; i < k; ++i) combos = combos * static_cast<double>(n - static_cast<size_t>(i)) / (i + 1);
  if (combos > static_cast<double>(budget))
    throw InvalidArgument("combinatorial budget exceeded: C(n,k) = " + std::to_string(combos));

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  parallel_for(n, [&](size_t i) {
    for (size_t j = 0; j < n; ++j) dist[i][j] = i == j ? 0.0 : tj(g, alpha, data[i], data[j]);
  });

  std::vector<size_t> subset(static_cast<size_t>(k));
  for (size_t i = 0; i < subset.size(); ++i) subset[i] = i;
  std::vector<size_t> best_subset = subset;
  double best = kInf;
  while (true) {
    double pot = 0.0;
    for (size_t i = 0; i < n && pot < best; ++i) {
      double m = kInf;
      for (size_t c : subset) m = std::min(m, dist[i][c]);
      pot += m;
    }
    if (pot < best) {
      best = pot;
      best_subset = subset;
    }
    // Next k-combination in lexicographic order.
    int pos = k - 1;
    while (pos >= 0 && subset[static_cast<size_t>(pos)] == n - static_cast<size_t>(k) + static_cast<size_t>(pos)) --pos;
    if (pos < 0) break;
    ++subset[static_cast<size_t>(pos)];
    for (size_t j = static_cast<size_t>(pos) + 1; j < subset.size(); ++j) subset[j] = subset[j - 1] + 1;
  }

  std::vector<Vector> centers;
  for (size_t c : best_subset) centers.push_back(data[c]);
  ClusterModel m = assign(g, alpha, data, centers);
  m.center_indices = best_subset;
  return m;
}

ClusterModel lloyd_cluster(const Generator& g, const std::vector<Vector>& data, const SeedingConfig& cfg,
                           const CentroidConfig& centroid_cfg, int max_rounds) {
  if (max_rounds < 1) throw InvalidArgument("max_rounds must be positive");
  CentroidConfig ccfg = centroid_cfg;
  ccfg.alpha = cfg.alpha;
  const Seeding s = seed(g, data, cfg);
  std::vector<Vector> centers = s.centers;
  std::vector<size_t> assignments;
  std::vector<LloydRound> rounds;
  int repairs = 0;
  ClusterModel m;

  for (int round = 0; round < max_rounds; ++round) {
    LloydRound r;
    if (!assignments.empty()) {
      for (size_t i = 0; i < data.size(); ++i) r.potential_before_assignment += tj(g, cfg.alpha, data[i], centers[assignments[i]]);
    } else {
      r.potential_before_assignment = kInf;
    }
    m = assign(g, cfg.alpha, data, centers);
    r.potential_after_assignment = m.potential;
    r.assignments_changed = m.assignments != assignments;
    rounds.push_back(r);
    assignments = m.assignments;
    if (!r.assignments_changed) break;

    for (size_t j = 0; j < centers.size(); ++j) {
      std::vector<Vector> members;
      for (size_t i = 0; i < data.size(); ++i)
        if (assignments[i] == j) members.push_back(data[i]);
      if (members.empty()) {
        size_t far = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < data.size(); ++i) {
          const double d = tj(g, cfg.alpha, data[i], centers[assignments[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers[j] = data[far];
        ++repairs;
        continue;
      }
      centers[j] = total_jensen_centroid(g, WeightedPointSet::uniform(std::move(members)), ccfg).center;
    }
    if (round + 1 == max_rounds) {
      m = assign(g, cfg.alpha, data, centers);
      assignments = m.assignments;
    }
  }
  m.rounds = std::move(rounds);
  m.empty_cluster_repairs = repairs;
  // Centers that are still the seeded data points keep their row index.
  for (const auto& c : m.centers) {
    auto it = std::find(s.centers.begin(), s.centers.end(), c);
    if (it == s.centers.end()) {
      m.center_indices.clear();
      break;
    }
    m.center_indices.push_back(s.indices[static_cast<size_t>(it - s.centers.begin())]);
  }
  return m;
}

double BoundConstants::u_hat(double epsilon) const { return 2.0 * (1.0 + k2_hat) * k1_hat * k1_hat / epsilon; }

double BoundConstants::v_hat(double epsilon) const { return k1_hat * k1_hat * (1.0 + k2_hat) / epsilon; }

double BoundConstants::seeding_multiplier(double epsilon, int k) const {
  const double u = u_hat(epsilon);
  return 2.0 * u * u * (1.0 + v_hat(epsilon)) * (2.0 + std::log(static_cast<double>(k)));
}

Vector sample_convex_closure(const std::vector<Vector>& data, Rng& rng) {
  if (data.size() == 1) return data.front();
  if (rng.uniform() < 0.5) {
    // Uniform point on a random segment reaches the hull boundary.
    const size_t i = rng.index(data.size());
    const size_t j = rng.index(data.size());
    const double t = rng.uniform();
    return data[i] + t * (data[j] - data[i]);
  }
  std::vector<double> w(data.size());
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  Vector out = Vector::Zero(data.front().size());
  for (size_t i = 0; i < data.size(); ++i) out += (w[i] / total) * data[i];
  return out;
}

BoundConstants estimate_bound_constants(const Generator& g, const std::vector<Vector>& data, int samples,
                                        uint64_t rng_seed) {
  check_points(g, data);
  if (!g.has_hessian()) throw InvalidArgument("bound constants need the Hessian of '" + g.name() + "'");
  if (samples < 0) throw InvalidArgument("sample count must be nonnegative");
  BoundConstants bc;
  Rng rng(rng_seed, 1);

  std::vector<Vector> pts = data;
  for (int s = 0; s < samples; ++s) pts.push_back(sample_convex_closure(data, rng));

  auto mark_unbounded = [&](const Vector& x) {
    if (bc.bounded) bc.offending_point = x;
    bc.bounded = false;
  };

  // K1 from Hessian spectra.
  double lambda_max = 0.0, lambda_min = kInf;
  for (const auto& x : pts) {
    double lo, hi;
    try {
      const Matrix h = g.hessian(x);
      if (g.is_separable()) {
        lo = h.diagonal().minCoeff();
        hi = h.diagonal().maxCoeff();
      } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        lo = es.eigenvalues().minCoeff();
        hi = es.eigenvalues().maxCoeff();
      }
    } catch (const DomainError&) {
      lo = 0.0, hi = kInf;
    }
    if (!(lo > 0.0) || !std::isfinite(hi)) {
      mark_unbounded(x);
      bc.k1_hat = bc.k1_global_hat = kInf;
      continue;
    }
    bc.k1_hat = std::max(bc.k1_hat, hi / lo);
    lambda_max = std::max(lambda_max, hi);
    lambda_min = std::min(lambda_min, lo);
  }
  if (std::isfinite(bc.k1_global_hat) && lambda_min > 0.0) bc.k1_global_hat = std::max(1.0, lambda_max / lambda_min);

  // Closure bounding box, used for exact extremes of separable generators.
  Vector box_lo = data.front(), box_hi = data.front();
  for (const auto& x : data) {
    box_lo = box_lo.cwiseMin(x);
    box_hi = box_hi.cwiseMax(x);
  }

  // K2 = sup chord slope squared.
  if (g.is_scalar()) {
    bc.k2_exact = true;
    const auto& b = g.base();
    double sup = 0.0;
    for (double end : {box_lo(0), box_hi(0)}) {
      if (!b.domain.interior(end)) {
        mark_unbounded(scalar(end));
        sup = kInf;
        break;
      }
      sup = std::max(sup, b.df(end) * b.df(end));
    }
    bc.k2_hat = sup;
  } else {
    auto slope_sq = [&](const Vector& a, const Vector& c) {
      if (a == c) return 0.0;
      const double df = g.eval(a) - g.eval(c);
      return df * df / (a - c).squaredNorm();
    };
    const size_t n = std::min<size_t>(data.size(), 300);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) bc.k2_hat = std::max(bc.k2_hat, slope_sq(data[i], data[j]));
    for (int s = 0; s < samples; ++s) {
      const Vector a = sample_convex_closure(data, rng);
      const Vector c = sample_convex_closure(data, rng);
      bc.k2_hat = std::max(bc.k2_hat, slope_sq(a, c));
    }
  }

  // rho extremes of 1 / sqrt(1 + ||grad F||^2).
  if (g.is_separable()) {
    bc.rho_exact = true;
    const auto& b = g.base();
    double grad_sq_max = 0.0, grad_sq_min = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      const double lo = box_lo(i), hi = box_hi(i);
      double at_lo = kInf, at_hi = kInf;
      if (b.domain.interior(lo)) at_lo = b.df(lo) * b.df(lo);
      if (b.domain.interior(hi)) at_hi = b.df(hi) * b.df(hi);
      grad_sq_max += std::max(at_lo, at_hi);
      const bool crosses = b.domain.interior(lo) && b.domain.interior(hi) && b.df(lo) <= 0.0 && b.df(hi) >= 0.0;
      grad_sq_min += crosses ? 0.0 : std::min(at_lo, at_hi);
    }
    if (!std::isfinite(grad_sq_max)) mark_unbounded(box_lo);
    bc.rho_min = 1.0 / std::sqrt(1.0 + grad_sq_max);
    bc.rho_max = 1.0 / std::sqrt(1.0 + grad_sq_min);
  } else {
    bc.rho_min = 1.0;
    bc.rho_max = 0.0;
    for (const auto& x : pts) {
      const double r = rho_b(g, x);
      bc.rho_min = std::min(bc.rho_min, r);
      bc.rho_max = std::max(bc.rho_max, r);
    }
  }
  return bc;
}

InequalitySurrogates inequality_surrogates(const Generator& g, double alpha, const std::vector<Vector>& data,
                                           int samples, uint64_t rng_seed) {
  check_points(g, data);
  check_alpha(alpha);
  Rng rng(rng_seed, 2);
  InequalitySurrogates s;
  s.samples = samples;
  for (int i = 0; i < samples; ++i) {
    const Vector p = sample_convex_closure(data, rng);
    const Vector q = sample_convex_closure(data, rng);
    const Vector r = sample_convex_closure(data, rng);
    const double pr = tj(g, alpha, p, r);
    const double denom = tj(g, alpha, p, q) + tj(g, alpha, q, r);
    if (denom > 0.0) s.triangle_sup = std::max(s.triangle_sup, pr / denom);
    const double back = tj(g, alpha, r, p);
    if (back > 0.0) s.symmetric_sup = std::max(s.symmetric_sup, pr / back);
  }
  return s;
}

SeedingExperiment seeding_bound_experiment(const Generator& g, const std::vector<Vector>& data,
                                           const SeedingConfig& cfg, double epsilon, int constant_samples) {
  if (cfg.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0,1]");
  SeedingExperiment ex;
  ex.epsilon = epsilon;
  ex.trial_potentials.resize(static_cast<size_t>(cfg.trials));
  parallel_for(ex.trial_potentials.size(), [&](size_t t) {
    const Seeding s = seed(g, data, cfg, t);
    ex.trial_potentials[t] = potential(g, cfg.alpha, data, s.centers);
  });
  double sum = 0.0;
  for (double v : ex.trial_potentials) sum += v;
  ex.mean_potential = sum / cfg.trials;

  const ClusterModel opt = brute_force_discrete_optimum(g, cfg.alpha, data, cfg.k);
  ex.optimal_potential = opt.potential;
  ex.optimal_indices = opt.center_indices;
  if (ex.optimal_potential > 0.0) {
    ex.ratio = ex.mean_potential / ex.optimal_potential;
  } else {
    ex.ratio = ex.mean_potential == 0.0 ? 0.0 : kInf;
  }

  ex.constants = estimate_bound_constants(g, data, constant_samples, cfg.rng_seed);
  ex.multiplier = ex.constants.seeding_multiplier(epsilon, cfg.k);
  ex.multiplier_finite = std::isfinite(ex.multiplier);
  ex.bound_holds = !ex.multiplier_finite || ex.ratio <= ex.multiplier;
  return ex;
}

}  // namespace tjd
