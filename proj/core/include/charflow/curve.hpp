#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "charflow/field.hpp"

namespace charflow {

/// Uniform grid t_i = i * T / N, i = 0..N, on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  std::size_t nodes() const { return steps_ + 1; }
  double step() const { return step_; }
  /// t_N is exactly T.
  double time(std::size_t i) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  std::size_t steps_;
  double step_;
};

/// Time-sampled path in R^d, piecewise linear between the grid nodes.
class Curve {
 public:
  /// `samples` holds (N + 1) * dim coordinates, node-major.
  Curve(TimeGrid grid, std::size_t dim, std::vector<double> samples);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return grid_.nodes(); }
  std::span<const double> sample(std::size_t i) const {
    return {samples_.data() + i * dim_, dim_};
  }
  std::span<const double> samples() const { return samples_; }
  /// Linear interpolation between nodes; t is clamped to [0, T].
  std::vector<double> at(double t) const;

  friend bool operator==(const Curve&, const Curve&) = default;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::vector<double> samples_;
};

/// Explicit Euler: gamma_{i+1} = gamma_i + h b(t_i, gamma_i).
Curve integrate_euler(const BoundedField& field, std::span<const double> x0,
                      const TimeGrid& grid);

struct PicardResult {
  Curve curve;
  /// Sup distance between the returned iterate and its predecessor.
  double sup_distance = 0.0;
  /// Iterations needed to reach the returned curve; the confirming sweep is
  /// not counted. Equals max_iter when not converged.
  std::size_t iterations = 0;
  bool converged = false;
};

/// Picard iteration gamma^{k+1}(t_i) = x0 + int_0^{t_i} b(s, gamma^k(s)) ds with
/// the trapezoid rule on the grid, starting from the constant curve x0.
/// Meant for fields continuous in x; for discontinuous fields the iterates
/// typically oscillate and `converged` stays false.
PicardResult integrate_picard(const BoundedField& field, std::span<const double> x0,
                              const TimeGrid& grid, std::size_t max_iter, double tol);

/// G(gamma)(t_i) = gamma_i - gamma_0 - sum_{j<i} h b(t_j, gamma_j).
///
/// Left-endpoint quadrature pairs with the Euler update, so Euler curves are
/// discrete integral curves up to rounding. Throws std::out_of_range for
/// i > N.
std::vector<double> integral_residual(const BoundedField& field, const Curve& curve,
                                      std::size_t i);

struct MembershipResult {
  bool is_integral = false;
  double max_residual = 0.0;
  std::size_t worst_index = 0;
};

/// Max over all grid nodes of |G(gamma)(t_i)|, compared against tol.
MembershipResult is_integral_curve(const BoundedField& field, const Curve& curve, double tol);

/// max_i |gamma_{i+1} - gamma_i| / h.
double lipschitz_constant(const Curve& curve);

/// Keeps every `stride`-th node; N must be divisible by stride.
Curve subsample(const Curve& curve, std::size_t stride);

/// max_i |a_i - b_i| over the nodes of two curves on the same grid.
double sup_distance(const Curve& a, const Curve& b);

}  // namespace charflow
