#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tjd/generators.hpp"

namespace tjd {

enum class DivergenceKind {
  kJensenRaw,
  kJensenScaled,
  kBregman,
  kTotalBregman,
  kTotalJensen,
  kTotalJensenRaw,
  kJensenShannon,
  kTotalJensenShannon,
  kKlGaussian,
};

std::string to_string(DivergenceKind k);
DivergenceKind parse_divergence_kind(const std::string& s);

/// Chord quantities between p and q with Delta = p - q, Delta_F = F(p) - F(q).
struct ConformalFactors {
  Vector delta;
  double delta_f = 0.0;
  double slope_sq = 0.0;  // Delta_F^2 / <Delta, Delta>
  double rho_j = 1.0;
  /// rho_B evaluated at any interior point of the same generator.
  std::function<double(const Vector&)> rho_b_at;
};

struct DivergenceValue {
  DivergenceKind kind;
  double value = 0.0;
  std::optional<ConformalFactors> factors;
};

/// Whether the total Jensen value is scaled by 1/(alpha(1-alpha)).
enum class JensenScaling { kScaled, kRaw };

DivergenceValue jensen_raw(const Generator& g, double alpha, const Vector& p, const Vector& q);
DivergenceValue jensen_scaled(const Generator& g, double alpha, const Vector& p, const Vector& q);
DivergenceValue bregman(const Generator& g, const Vector& p, const Vector& q);
DivergenceValue total_bregman(const Generator& g, const Vector& p, const Vector& q);
DivergenceValue total_jensen(const Generator& g, double alpha, const Vector& p, const Vector& q,
                             JensenScaling scaling = JensenScaling::kScaled);

double rho_b(const Generator& g, const Vector& q);
/// rho_J(p, q); 1 when p == q.
double rho_j(const Generator& g, const Vector& p, const Vector& q);
ConformalFactors conformal_factors(const Generator& g, const Vector& p, const Vector& q);

enum class StolarskyMethod { kAuto, kClosedForm, kBisection };

/// Point between p and q where F' equals the chord slope (scalar generators).
double stolarsky_epsilon(const Generator& g, double p, double q, double tol = 1e-12,
                         StolarskyMethod method = StolarskyMethod::kAuto);

/// Jensen-Shannon divergence (natural log, 0 log 0 = 0) and its total variant.
DivergenceValue jensen_shannon(const Vector& p, const Vector& q);
DivergenceValue total_jensen_shannon(const Vector& p, const Vector& q);

/// KL(N(mu1, sigma1) : N(mu2, sigma2)).
DivergenceValue kl_gaussian(const Vector& mu1, const Matrix& sigma1, const Vector& mu2, const Matrix& sigma2);

}  // namespace tjd
