#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tjd/generators.hpp"
#include "tjd/rng.hpp"

namespace tjd::test {

inline const std::vector<std::string> kScalarNames = {"shannon", "burg", "bit", "squared-euclidean"};

// Sampling box well inside each builtin's domain.
inline std::pair<double, double> sample_box(const std::string& name) {
  if (name == "bit") return {0.02, 0.98};
  if (name == "squared-euclidean" || name == "squared-mahalanobis") return {-3.0, 3.0};
  return {0.05, 5.0};
}

inline Vector random_point(Rng& rng, const std::string& name, int dim) {
  const auto [lo, hi] = sample_box(name);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace tjd::test
