#include "tjd/centroids.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "tjd/divergences.hpp"

namespace tjd {

namespace {

constexpr double kClampMargin = 1e-12;

void check_alpha_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("centroid alpha must lie in (0,1)");
}

void check_data(const Generator& g, const WeightedPointSet& data) {
  if (data.points.empty()) throw InvalidArgument("centroid of an empty point set");
  if (data.weights.size() != data.points.size()) throw InvalidArgument("weights and points differ in length");
  for (const auto& p : data.points) g.check_domain(p, false);
}

bool all_equal(const std::vector<Vector>& pts) {
  for (const auto& p : pts)
    if (p != pts.front()) return false;
  return true;
}

// One CCCP step; `shift` is added to the averaged gradient before inversion.
Vector cccp_step(const Generator& g, double alpha, const std::vector<Vector>& points, const std::vector<double>& w,
                 const Vector& c, const Vector* shift) {
  Vector acc = Vector::Zero(c.size());
  for (size_t i = 0; i < points.size(); ++i) {
    if (w[i] == 0.0) continue;
    acc += w[i] * g.grad(Vector(alpha * points[i] + (1.0 - alpha) * c));
  }
  if (shift) acc += *shift;
  return g.grad_inverse(acc);
}

}  // namespace

std::vector<double> normalize_weights(std::vector<double> w) {
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("weights must be finite and nonnegative");
    total += x;
  }
  if (!(total > 0.0)) throw InvalidArgument("weights must have a positive sum");
  for (double& x : w) x /= total;
  return w;
}

WeightedPointSet WeightedPointSet::uniform(std::vector<Vector> points) {
  std::vector<double> w(points.size(), 1.0);
  return weighted(std::move(points), std::move(w));
}

WeightedPointSet WeightedPointSet::weighted(std::vector<Vector> points, std::vector<double> raw_weights) {
  if (points.size() != raw_weights.size()) throw InvalidArgument("weights and points differ in length");
  for (const auto& p : points) {
    if (p.size() != points.front().size()) throw InvalidArgument("points have inconsistent dimensions");
  }
  WeightedPointSet s;
  s.weights = points.empty() ? std::vector<double>{} : normalize_weights(std::move(raw_weights));
  s.points = std::move(points);
  return s;
}

Vector WeightedPointSet::barycenter() const {
  Vector c = Vector::Zero(dim());
  for (size_t i = 0; i < points.size(); ++i) c += weights[i] * points[i];
  return c;
}

double jensen_loss(const Generator& g, double alpha, const std::vector<Vector>& points,
                   const std::vector<double>& weights, const Vector& x) {
  double s = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    if (weights[i] == 0.0) continue;
    s += weights[i] * jensen_scaled(g, alpha, points[i], x).value;
  }
  return s;
}

double total_jensen_loss(const Generator& g, double alpha, const WeightedPointSet& data, const Vector& x) {
  double s = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    if (data.weights[i] == 0.0) continue;
    s += data.weights[i] * total_jensen(g, alpha, data.points[i], x).value;
  }
  return s;
}

Vector rho_j_gradient(const Generator& g, const Vector& p, const Vector& x) {
  if (p == x) return Vector::Zero(x.size());
  const Vector delta = p - x;
  const double dd = delta.squaredNorm();
  const double df = g.eval(p) - g.eval(x);
  const double s2 = df * df / dd;
  const Vector ds2 = (2.0 * df / dd) * (-g.grad(x) + (df / dd) * delta);
  return -0.5 * std::pow(1.0 + s2, -1.5) * ds2;
}

CccpResult jensen_centroid_cccp(const Generator& g, double alpha, const WeightedPointSet& data,
                                const std::optional<std::vector<double>>& weights_override, int iters,
                                double step_tol, const std::optional<Vector>& start) {
  check_alpha_open(alpha);
  check_data(g, data);
  if (!g.has_grad_inverse()) throw InvalidArgument("CCCP requires an inverse gradient for '" + g.name() + "'");
  if (iters < 0) throw InvalidArgument("iteration count must be nonnegative");
  std::vector<double> w = data.weights;
  if (weights_override) {
    if (weights_override->size() != data.size()) throw InvalidArgument("weight override has the wrong length");
    w = normalize_weights(*weights_override);
  }

  CccpResult r;
  if (start) {
    g.check_domain(*start, false);
    r.center = *start;
  } else {
    r.center = Vector::Zero(data.dim());
    for (size_t i = 0; i < data.size(); ++i) r.center += w[i] * data.points[i];
  }
  if (all_equal(data.points)) {
    r.center = data.points.front();
    r.losses.push_back(0.0);
    return r;
  }
  r.losses.push_back(jensen_loss(g, alpha, data.points, w, r.center));
  for (int it = 0; it < iters; ++it) {
    Vector next = cccp_step(g, alpha, data.points, w, r.center, nullptr);
    if (!g.domain().interior(next)) {
      next = g.domain().clamp_interior(next, kClampMargin);
      r.clamped = true;
    }
    const double step = (next - r.center).norm();
    r.center = std::move(next);
    r.losses.push_back(jensen_loss(g, alpha, data.points, w, r.center));
    r.iterations = it + 1;
    if (step_tol > 0.0 && step <= step_tol * std::max(1.0, r.center.norm())) break;
  }
  return r;
}

namespace {

struct StageOutcome {
  Vector center;
  double loss;
  bool progressed;
  bool clamped;
};

// One corrected stage: CCCP on the reweighted Jensen loss plus the linearized
// conformal-factor term, safeguarded so L never increases.
StageOutcome corrected_stage(const Generator& g, const WeightedPointSet& data, const CentroidConfig& cfg,
                             const std::vector<double>& stage_w, double rho_sum, const Vector& c, double loss_c) {
  const double alpha = cfg.alpha;
  Vector lin = Vector::Zero(c.size());
  for (size_t i = 0; i < data.size(); ++i) {
    if (data.weights[i] == 0.0 || data.points[i] == c) continue;
    lin += data.weights[i] * jensen_scaled(g, alpha, data.points[i], c).value * rho_j_gradient(g, data.points[i], c);
  }
  const Vector full_shift = (-alpha / rho_sum) * lin;

  bool clamped = false;
  std::optional<Vector> target;
  for (double tau = 1.0; tau > 1e-12 && !target; tau *= 0.5) {
    const Vector shift = tau * full_shift;
    try {
      Vector x = c;
      for (int l = 0; l < cfg.inner_cccp_iters; ++l) {
        x = cccp_step(g, alpha, data.points, stage_w, x, &shift);
        if (!g.domain().interior(x)) {
          x = g.domain().clamp_interior(x, kClampMargin);
          clamped = true;
        }
      }
      target = std::move(x);
    } catch (const DomainError&) {
      // shifted gradient left the range of grad F; shrink the correction
    }
  }
  if (!target) return {c, loss_c, false, clamped};

  // Backtrack along the segment towards c, which stays inside the domain.
  for (double t = 1.0; t > 1e-10; t *= 0.5) {
    Vector x = c + t * (*target - c);
    const double lx = total_jensen_loss(g, alpha, data, x);
    if (lx < loss_c) return {std::move(x), lx, true, clamped};
  }
  return {c, loss_c, false, clamped};
}

}  // namespace

CentroidResult total_jensen_centroid(const Generator& g, const WeightedPointSet& data, const CentroidConfig& cfg) {
  check_alpha_open(cfg.alpha);
  check_data(g, data);
  if (!g.has_grad_inverse()) throw InvalidArgument("CCCP requires an inverse gradient for '" + g.name() + "'");
  if (!(cfg.outer_tol > 0.0)) throw InvalidArgument("outer_tol must be positive");
  if (cfg.inner_cccp_iters < 1 || cfg.outer_max_iters < 1) throw InvalidArgument("iteration counts must be positive");

  CentroidResult res;
  if (all_equal(data.points)) {
    res.center = data.points.front();
    res.loss_trace = {0.0};
    res.stage_weights_trace = {data.weights};
    res.converged = true;
    res.iterations = 1;
    return res;
  }

  Vector c = cfg.init ? *cfg.init : data.barycenter();
  g.check_domain(c, true);
  double loss = total_jensen_loss(g, cfg.alpha, data, c);
  res.loss_trace.push_back(loss);

  Vector best = c;
  double best_loss = loss;
  int increases = 0;

  for (int t = 0; t < cfg.outer_max_iters; ++t) {
    // Stage 1: conformal reweighting at the current center.
    std::vector<double> stage_w(data.size());
    double rho_sum = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
      const double rho = data.points[i] == c ? 1.0 : rho_j(g, data.points[i], c);
      stage_w[i] = data.weights[i] * rho;
      rho_sum += stage_w[i];
    }
    for (double& w : stage_w) w /= rho_sum;
    res.stage_weights_trace.push_back(stage_w);
    res.iterations = t + 1;

    // Stage 2: CCCP on the reweighted skew Jensen loss.
    double next_loss;
    if (cfg.conformal_correction) {
      StageOutcome out = corrected_stage(g, data, cfg, stage_w, rho_sum, c, loss);
      res.clamped = res.clamped || out.clamped;
      if (!out.progressed) {
        res.converged = true;
        break;
      }
      c = std::move(out.center);
      next_loss = out.loss;
    } else {
      auto inner = jensen_centroid_cccp(g, cfg.alpha, data, stage_w, cfg.inner_cccp_iters, 0.0, c);
      res.clamped = res.clamped || inner.clamped;
      c = std::move(inner.center);
      next_loss = total_jensen_loss(g, cfg.alpha, data, c);
    }
    res.loss_trace.push_back(next_loss);

    if (next_loss < best_loss) {
      best = c;
      best_loss = next_loss;
    }
    increases = next_loss > loss ? increases + 1 : 0;
    const bool small = std::abs(loss - next_loss) < cfg.outer_tol;
    loss = next_loss;
    if (small) {
      res.converged = true;
      break;
    }
    if (increases >= cfg.max_consecutive_increases) break;
  }
  res.center = best;
  return res;
}

CentroidResult left_sided_centroid(const Generator& g, const WeightedPointSet& data, const CentroidConfig& cfg) {
  CentroidConfig flipped = cfg;
  flipped.alpha = 1.0 - cfg.alpha;
  return total_jensen_centroid(g, data, flipped);
}

}  // namespace tjd
