#pragma once

#include <optional>

#include "tjd/generators.hpp"

namespace tjd {

/// Orthogonal projection of the graph point ((pq)_alpha, F((pq)_alpha)) onto
/// the chord through (p, F(p)) and (q, F(q)), in the vertical cross-section
/// with abscissa measured from q along p - q.
struct ProjectionResult {
  double beta = 0.0;
  double foot_abscissa = 0.0;
  double foot_ordinate = 0.0;
  double distance = 0.0;  // unscaled total Jensen value
  double j_raw = 0.0;
  double rho_j = 1.0;
  /// |l^2 + distance^2 - j_raw^2| / j_raw^2 (0 when j_raw == 0).
  double pythagoras_residual = 0.0;
  /// Dot product of the residual segment with the unit chord direction,
  /// relative to the residual length.
  double orthogonality_residual = 0.0;
};

ProjectionResult project_beta(const Generator& g, double alpha, const Vector& p, const Vector& q);

/// Unscaled total Jensen value as a plain 2D point-to-line distance. The
/// cross-section is optionally rotated by `rotation` radians about the graph
/// point first.
double geometric_oracle_tj(const Generator& g, double alpha, const Vector& p, const Vector& q,
                           double rotation = 0.0);

struct SecondKindResult {
  double alpha = 0.0;  // point on the graph meeting the orthogonality condition
  double value = 0.0;
};

/// Total Jensen divergence of the second kind: fixes the chord point at
/// beta and searches the graph point by bisection.
SecondKindResult second_kind_tj(const Generator& g, double beta, const Vector& p, const Vector& q,
                                double tol = 1e-14);

/// Closed-form alpha for the second kind, available for squared-euclidean
/// (any dimension) and scalar Burg generators.
std::optional<double> second_kind_alpha_closed_form(const Generator& g, double beta, const Vector& p,
                                                    const Vector& q);

}  // namespace tjd
