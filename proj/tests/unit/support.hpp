#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "charflow/measure.hpp"

namespace charflow::test {

// Midpoint particles on [a, b] carrying `density` per unit length.
inline ParticleMeasure midpoint_measure(double a, double b, std::size_t n, double density = 1.0) {
  std::vector<double> points(n);
  std::vector<double> weights(n, density * (b - a) / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    points[k] = a + (static_cast<double>(k) + 0.5) * (b - a) / static_cast<double>(n);
  }
  return ParticleMeasure(1, std::move(points), std::move(weights));
}

inline ParticleMeasure random_measure(std::mt19937_64& rng, std::size_t dim, std::size_t n,
                                      double lo, double hi, bool signed_weights = false) {
  std::uniform_real_distribution<double> pos(lo, hi);
  std::uniform_real_distribution<double> mass(signed_weights ? -1.0 : 0.0, 1.0);
  std::vector<double> points(n * dim);
  std::vector<double> weights(n);
  for (double& p : points) p = pos(rng);
  for (double& w : weights) w = mass(rng);
  return ParticleMeasure(dim, std::move(points), std::move(weights));
}

}  // namespace charflow::test
