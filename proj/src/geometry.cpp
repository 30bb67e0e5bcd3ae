#include "tjd/geometry.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/lambert_w.hpp>

namespace tjd {

namespace {

struct CrossSection {
  double len = 0.0;      // ||p - q||
  double len_sq = 0.0;   // <p - q, p - q>
  double fp = 0.0;
  double fq = 0.0;
  double delta_f = 0.0;  // F(p) - F(q)
};

CrossSection cross_section(const Generator& g, const Vector& p, const Vector& q) {
  g.check_domain(p, false);
  g.check_domain(q, false);
  if (p == q) throw InvalidArgument("projection undefined for p == q");
  CrossSection cs;
  cs.len_sq = (p - q).squaredNorm();
  cs.len = std::sqrt(cs.len_sq);
  cs.fp = g.eval(p);
  cs.fq = g.eval(q);
  cs.delta_f = cs.fp - cs.fq;
  return cs;
}

void check_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw InvalidArgument(std::string(what) + " must lie in (0,1)");
}

}  // namespace

ProjectionResult project_beta(const Generator& g, double alpha, const Vector& p, const Vector& q) {
  check_open_unit(alpha, "alpha");
  const CrossSection cs = cross_section(g, p, q);
  const double f_mid = g.eval(Vector(q + alpha * (p - q)));

  ProjectionResult r;
  r.j_raw = alpha * cs.fp + (1.0 - alpha) * cs.fq - f_mid;
  // F(mid) - F(q) rewritten as alpha Delta_F - J' to avoid cancellation for close points.
  const double rise = alpha * cs.delta_f - r.j_raw;
  const double chord_sq = cs.len_sq + cs.delta_f * cs.delta_f;
  r.beta = (cs.delta_f * rise + alpha * cs.len_sq) / chord_sq;
  r.foot_abscissa = r.beta * cs.len;
  r.foot_ordinate = cs.fq + r.beta * cs.delta_f;

  const double dx = (alpha - r.beta) * cs.len;
  const double dy = (alpha - r.beta) * cs.delta_f - r.j_raw;
  r.distance = std::hypot(dx, dy);
  r.rho_j = 1.0 / std::sqrt(1.0 + cs.delta_f * cs.delta_f / cs.len_sq);

  const double l_sq = (alpha - r.beta) * (alpha - r.beta) * chord_sq;
  if (r.j_raw != 0.0) r.pythagoras_residual = std::abs(l_sq + r.distance * r.distance - r.j_raw * r.j_raw) / (r.j_raw * r.j_raw);
  if (r.distance > 0.0) {
    const double chord = std::sqrt(chord_sq);
    r.orthogonality_residual = std::abs(dx * cs.len + dy * cs.delta_f) / (chord * r.distance);
  }
  return r;
}

double geometric_oracle_tj(const Generator& g, double alpha, const Vector& p, const Vector& q, double rotation) {
  check_open_unit(alpha, "alpha");
  const CrossSection cs = cross_section(g, p, q);
  const double f_mid = g.eval(Vector(q + alpha * (p - q)));

  // Chord endpoints relative to the graph point X = (alpha len, f_mid).
  double ax = (1.0 - alpha) * cs.len, ay = cs.fp - f_mid;
  double bx = -alpha * cs.len, by = cs.fq - f_mid;
  if (rotation != 0.0) {
    const double c = std::cos(rotation), s = std::sin(rotation);
    const double ax2 = c * ax - s * ay, ay2 = s * ax + c * ay;
    const double bx2 = c * bx - s * by, by2 = s * bx + c * by;
    ax = ax2, ay = ay2, bx = bx2, by = by2;
  }
  // Distance from the origin to the line AB.
  return std::abs(ax * by - ay * bx) / std::hypot(bx - ax, by - ay);
}

std::optional<double> second_kind_alpha_closed_form(const Generator& g, double beta, const Vector& p,
                                                    const Vector& q) {
  check_open_unit(beta, "beta");
  const CrossSection cs = cross_section(g, p, q);
  const Vector delta = p - q;
  const double a = beta * (cs.len_sq + cs.delta_f * cs.delta_f) + cs.delta_f * cs.fq;
  const double b = cs.delta_f;
  const double c = cs.len_sq;
  constexpr double kSlack = 1e-9;
  auto admissible = [&](double x) { return std::isfinite(x) && x >= -kSlack && x <= 1.0 + kSlack; };

  if (g.name() == "squared-euclidean") {
    if (b == 0.0) return a / c;
    // b F(q + x Delta) + x c - a, expanded in x.
    const double qa = 0.5 * b * cs.len_sq;
    const double qb = b * q.dot(delta) + c;
    const double qc = 0.5 * b * q.squaredNorm() - a;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return std::nullopt;
    const double t = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    const double r1 = t / qa;
    const double r2 = qc / t;
    if (admissible(r1)) return r1;
    if (admissible(r2)) return r2;
    return std::nullopt;
  }

  if (g.name() == "burg" && g.dim() == 1) {
    const double d = delta(0), q0 = q(0);
    if (b == 0.0) return a / c;
    // -b log u + (c/d)(u - q) - a = 0 with u = q + x d, solved by Lambert W.
    const double k = c / (b * d);
    const double m = -(c * q0 / (b * d) + a / b);
    const double z = -k * std::exp(m);
    if (!std::isfinite(z) || z < -1.0 / std::exp(1.0)) return std::nullopt;
    std::optional<double> best;
    auto consider = [&](double w) {
      const double u = -w / k;
      const double x = (u - q0) / d;
      if (admissible(x) && !best) best = x;
    };
    consider(boost::math::lambert_w0(z));
    if (z < 0.0) consider(boost::math::lambert_wm1(z));
    return best;
  }
  return std::nullopt;
}

SecondKindResult second_kind_tj(const Generator& g, double beta, const Vector& p, const Vector& q, double tol) {
  check_open_unit(beta, "beta");
  const CrossSection cs = cross_section(g, p, q);
  const Vector delta = p - q;
  const double a = beta * (cs.len_sq + cs.delta_f * cs.delta_f) + cs.delta_f * cs.fq;
  auto residual = [&](double x) { return cs.delta_f * g.eval(Vector(q + x * delta)) + x * cs.len_sq - a; };

  // residual(0) = -beta |chord|^2 < 0 and residual(1) = (1 - beta) |chord|^2 > 0.
  double lo = 0.0, hi = 1.0;
  double r_lo = residual(lo), r_hi = residual(hi);
  if (!(r_lo <= 0.0 && r_hi >= 0.0)) throw ConvergenceError("second-kind residual has no sign change on [0,1]");
  double x = 0.5;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    x = 0.5 * (lo + hi);
    const double r = residual(x);
    if (std::isnan(r)) throw ConvergenceError("second-kind residual is NaN");
    if (r == 0.0) {
      lo = hi = x;
      break;
    }
    (r < 0.0 ? lo : hi) = x;
  }
  x = 0.5 * (lo + hi);

  const double f_graph = g.eval(Vector(q + x * delta));
  const double f_chord = cs.fq + beta * cs.delta_f;
  const double len = std::sqrt((x - beta) * (x - beta) * cs.len_sq + (f_graph - f_chord) * (f_graph - f_chord));
  return {x, len / (beta * (1.0 - beta))};
}

}  // namespace tjd
