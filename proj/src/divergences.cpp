#include "tjd/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tjd {

std::string to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::kJensenRaw: return "jensen-raw";
    case DivergenceKind::kJensenScaled: return "jensen-scaled";
    case DivergenceKind::kBregman: return "bregman";
    case DivergenceKind::kTotalBregman: return "total-bregman";
    case DivergenceKind::kTotalJensen: return "total-jensen";
    case DivergenceKind::kTotalJensenRaw: return "total-jensen-raw";
    case DivergenceKind::kJensenShannon: return "jensen-shannon";
    case DivergenceKind::kTotalJensenShannon: return "total-jensen-shannon";
    case DivergenceKind::kKlGaussian: return "kl-gaussian";
  }
  return "unknown";
}

DivergenceKind parse_divergence_kind(const std::string& s) {
  for (auto k : {DivergenceKind::kJensenRaw, DivergenceKind::kJensenScaled, DivergenceKind::kBregman,
                 DivergenceKind::kTotalBregman, DivergenceKind::kTotalJensen, DivergenceKind::kTotalJensenRaw,
                 DivergenceKind::kJensenShannon, DivergenceKind::kTotalJensenShannon, DivergenceKind::kKlGaussian}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown divergence kind '" + s + "'");
}

namespace {

void check_pair(const Generator& g, const Vector& p, const Vector& q, bool q_interior) {
  g.check_domain(p, false);
  g.check_domain(q, q_interior);
}

bool is_skew_limit(double alpha) { return alpha == 0.0 || alpha == 1.0; }

// Raw Jensen gap without argument checks; caller guarantees p != q.
double jensen_gap(const Generator& g, double alpha, const Vector& p, const Vector& q) {
  const Vector mid = alpha * p + (1.0 - alpha) * q;
  return alpha * g.eval(p) + (1.0 - alpha) * g.eval(q) - g.eval(mid);
}

double bregman_value(const Generator& g, const Vector& p, const Vector& q) {
  if (p == q) return 0.0;
  const double v = g.eval(p) - g.eval(q) - (p - q).dot(g.grad(q));
  return std::max(v, 0.0);
}

double jensen_scaled_value(const Generator& g, double alpha, const Vector& p, const Vector& q) {
  if (alpha == 0.0) return bregman_value(g, p, q);
  if (alpha == 1.0) return bregman_value(g, q, p);
  if (p == q) return 0.0;
  double v = jensen_gap(g, alpha, p, q) / (alpha * (1.0 - alpha));
  if (alpha > 0.0 && alpha < 1.0) v = std::max(v, 0.0);
  return v;
}


void check_histogram(const Vector& p, const Vector& q) {
  if (p.size() != q.size() || p.size() == 0) throw InvalidArgument("points must have equal nonzero dimension");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= 0.0) || !(q(i) >= 0.0) || !std::isfinite(p(i)) || !std::isfinite(q(i)))
      throw DomainError("Jensen-Shannon requires finite nonnegative components (coordinate " + std::to_string(i) + ")");
  }
}

}  // namespace

DivergenceValue jensen_raw(const Generator& g, double alpha, const Vector& p, const Vector& q) {
  if (is_skew_limit(alpha)) throw InvalidArgument("raw Jensen divergence undefined at alpha in {0,1}");
  check_pair(g, p, q, false);
  if (p == q) return {DivergenceKind::kJensenRaw, 0.0, std::nullopt};
  double v = jensen_gap(g, alpha, p, q);
  if (alpha > 0.0 && alpha < 1.0) v = std::max(v, 0.0);
  return {DivergenceKind::kJensenRaw, v, std::nullopt};
}

DivergenceValue jensen_scaled(const Generator& g, double alpha, const Vector& p, const Vector& q) {
  check_pair(g, p, q, alpha == 0.0);
  if (alpha == 1.0) g.check_domain(p, true);
  return {DivergenceKind::kJensenScaled, jensen_scaled_value(g, alpha, p, q), std::nullopt};
}

DivergenceValue bregman(const Generator& g, const Vector& p, const Vector& q) {
  check_pair(g, p, q, true);
  return {DivergenceKind::kBregman, bregman_value(g, p, q), std::nullopt};
}

double rho_b(const Generator& g, const Vector& q) {
  const Vector grad = g.grad(q);
  return 1.0 / std::sqrt(1.0 + grad.squaredNorm());
}

DivergenceValue total_bregman(const Generator& g, const Vector& p, const Vector& q) {
  check_pair(g, p, q, true);
  return {DivergenceKind::kTotalBregman, rho_b(g, q) * bregman_value(g, p, q), std::nullopt};
}

ConformalFactors conformal_factors(const Generator& g, const Vector& p, const Vector& q) {
  check_pair(g, p, q, false);
  if (p == q) throw InvalidArgument("conformal factors undefined for p == q");
  ConformalFactors cf;
  cf.delta = p - q;
  cf.delta_f = g.eval(p) - g.eval(q);
  cf.slope_sq = cf.delta_f * cf.delta_f / cf.delta.squaredNorm();
  cf.rho_j = 1.0 / std::sqrt(1.0 + cf.slope_sq);
  cf.rho_b_at = [g](const Vector& x) { return rho_b(g, x); };
  return cf;
}

double rho_j(const Generator& g, const Vector& p, const Vector& q) {
  if (p == q) {
    check_pair(g, p, q, false);
    return 1.0;
  }
  return conformal_factors(g, p, q).rho_j;
}

DivergenceValue total_jensen(const Generator& g, double alpha, const Vector& p, const Vector& q,
                             JensenScaling scaling) {
  const auto kind = scaling == JensenScaling::kRaw ? DivergenceKind::kTotalJensenRaw : DivergenceKind::kTotalJensen;
  if (scaling == JensenScaling::kRaw && is_skew_limit(alpha))
    throw InvalidArgument("raw total Jensen divergence undefined at alpha in {0,1}");
  check_pair(g, p, q, alpha == 0.0);
  if (alpha == 1.0) g.check_domain(p, true);
  if (p == q) return {kind, 0.0, std::nullopt};

  ConformalFactors cf = conformal_factors(g, p, q);
  double j;
  if (scaling == JensenScaling::kRaw) {
    j = jensen_gap(g, alpha, p, q);
    if (alpha > 0.0 && alpha < 1.0) j = std::max(j, 0.0);
  } else {
    j = jensen_scaled_value(g, alpha, p, q);
  }
  const double v = cf.rho_j * j;
  return {kind, v, std::move(cf)};
}

double stolarsky_epsilon(const Generator& g, double p, double q, double tol, StolarskyMethod method) {
  if (!g.is_scalar()) throw InvalidArgument("Stolarsky point requires a scalar generator");
  if (p == q) throw InvalidArgument("Stolarsky point undefined for p == q");
  g.check_domain(scalar(p), false);
  g.check_domain(scalar(q), false);
  const double slope = (g.eval(p) - g.eval(q)) / (p - q);
  double lo = std::min(p, q);
  double hi = std::max(p, q);

  const bool closed = g.has_grad_inverse() && method != StolarskyMethod::kBisection;
  if (method == StolarskyMethod::kClosedForm && !g.has_grad_inverse())
    throw InvalidArgument("generator '" + g.name() + "' has no closed-form inverse gradient");
  if (closed) {
    const double eps = g.grad_inverse(scalar(slope))(0);
    // Rounding in the slope can push the answer a hair outside [lo, hi].
    return std::clamp(eps, lo, hi);
  }

  const auto& df = g.base().df;
  double mid = 0.5 * (lo + hi);
  for (int step = 0; step < 200; ++step) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = df(mid) - slope;
    if (std::abs(r) <= tol) break;
    (r < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

DivergenceValue jensen_shannon(const Vector& p, const Vector& q) {
  check_histogram(p, q);
  if (p == q) return {DivergenceKind::kJensenShannon, 0.0, std::nullopt};
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double m = p(i) + q(i);
    if (m == 0.0) continue;
    if (p(i) > 0.0) s += 0.5 * p(i) * std::log(2.0 * p(i) / m);
    if (q(i) > 0.0) s += 0.5 * q(i) * std::log(2.0 * q(i) / m);
  }
  return {DivergenceKind::kJensenShannon, std::max(s, 0.0), std::nullopt};
}

DivergenceValue total_jensen_shannon(const Vector& p, const Vector& q) {
  const double js = jensen_shannon(p, q).value;
  if (p == q) return {DivergenceKind::kTotalJensenShannon, 0.0, std::nullopt};
  const Generator shannon = make_builtin("shannon", static_cast<int>(p.size()));
  ConformalFactors cf = conformal_factors(shannon, p, q);
  const double v = cf.rho_j * js;
  return {DivergenceKind::kTotalJensenShannon, v, std::move(cf)};
}

namespace {

Eigen::LLT<Matrix> spd_factor(const Matrix& s, const char* which) {
  if (s.rows() != s.cols()) throw InvalidArgument(std::string(which) + " must be square");
  if (!s.isApprox(s.transpose(), 1e-12)) throw InvalidArgument(std::string(which) + " must be symmetric");
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) throw DomainError(std::string(which) + " must be positive-definite");
  return llt;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

DivergenceValue kl_gaussian(const Vector& mu1, const Matrix& sigma1, const Vector& mu2, const Matrix& sigma2) {
  const Eigen::Index d = mu1.size();
  if (d == 0 || mu2.size() != d || sigma1.rows() != d || sigma2.rows() != d)
    throw InvalidArgument("Gaussian parameters have mismatched dimensions");
  const auto l1 = spd_factor(sigma1, "sigma1");
  const auto l2 = spd_factor(sigma2, "sigma2");
  const Vector dmu = mu1 - mu2;
  const double trace = l2.solve(sigma1).trace();
  const double quad = dmu.dot(l2.solve(dmu));
  const double v = 0.5 * (trace + quad - (log_det(l1) - log_det(l2)) - static_cast<double>(d));
  return {DivergenceKind::kKlGaussian, std::max(v, 0.0), std::nullopt};
}

}  // namespace tjd
