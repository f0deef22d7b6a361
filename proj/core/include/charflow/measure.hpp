#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "charflow/curve.hpp"

namespace charflow {

/// Finite weighted point cloud sum_j w_j delta_{x_j} in R^d.
///
/// Immutable value type: coordinates and weights are shared between copies,
/// so a push-forward keeps the weights bitwise (it reuses the same buffer).
class ParticleMeasure {
 public:
  explicit ParticleMeasure(std::size_t dim = 1);
  /// `points` holds size * dim coordinates. Throws std::invalid_argument on
  /// length mismatch or non-finite entries.
  ParticleMeasure(std::size_t dim, std::vector<double> points, std::vector<double> weights);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return weights_->size(); }
  bool empty() const { return weights_->empty(); }
  std::span<const double> point(std::size_t j) const {
    return {points_->data() + j * dim_, dim_};
  }
  std::span<const double> points() const { return *points_; }
  std::span<const double> weights() const { return *weights_; }
  /// True iff every weight is >= 0. Gates everything that assumes a
  /// non-negative measure (superposition, W1).
  bool nonnegative() const { return nonnegative_; }
  double total_mass() const;

  /// Same weights (shared buffer) at new positions.
  ParticleMeasure with_points(std::vector<double> points) const;
  /// Same positions (shared buffer) with new weights.
  ParticleMeasure with_weights(std::vector<double> weights) const;

  bool shares_weights_with(const ParticleMeasure& other) const {
    return weights_ == other.weights_;
  }
  /// Bitwise equality of dimension, coordinates and weights.
  friend bool operator==(const ParticleMeasure& a, const ParticleMeasure& b);

 private:
  friend ParticleMeasure evaluate_curves(const class CurveMeasure& eta, std::size_t i);

  ParticleMeasure(std::size_t dim, std::shared_ptr<const std::vector<double>> points,
                  std::shared_ptr<const std::vector<double>> weights, bool nonnegative);

  std::size_t dim_;
  std::shared_ptr<const std::vector<double>> points_;
  std::shared_ptr<const std::vector<double>> weights_;
  bool nonnegative_ = true;
};

/// Point transformation x -> f(x); writes f(x) into the output span.
using PointMap = std::function<void(std::span<const double>, std::span<double>)>;

/// f_# mu: points mapped, weights untouched. If the map throws or yields a
/// non-finite coordinate, throws std::runtime_error naming the particle index.
ParticleMeasure pushforward(const ParticleMeasure& mu, const PointMap& map,
                            std::size_t out_dim = 0);

/// Finite non-negative measure on curve space: sum_k w_k delta_{gamma_k}.
class CurveMeasure {
 public:
  CurveMeasure(TimeGrid grid, std::size_t dim);
  /// All curves must share `grid` and `dim`; weights must be >= 0.
  CurveMeasure(TimeGrid grid, std::size_t dim, std::vector<Curve> curves,
               std::vector<double> weights);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return curves_.size(); }
  std::span<const Curve> curves() const { return curves_; }
  std::span<const double> weights() const { return *weights_; }
  double total_mass() const;

  /// Same curves, weights replaced.
  CurveMeasure with_weights(std::vector<double> weights) const;

  friend bool operator==(const CurveMeasure& a, const CurveMeasure& b);

 private:
  friend ParticleMeasure evaluate_curves(const CurveMeasure& eta, std::size_t i);

  TimeGrid grid_;
  std::size_t dim_;
  std::vector<Curve> curves_;
  std::shared_ptr<const std::vector<double>> weights_;
};

/// (e_{t_i})_# eta. Throws std::out_of_range for i > N.
ParticleMeasure evaluate_curves(const CurveMeasure& eta, std::size_t i);

/// Applies `map` to every sample of every curve (gamma -> f o gamma).
CurveMeasure map_curves(const CurveMeasure& eta, const PointMap& map);

/// |mu|(R^d) = sum_j |w_j|.
double total_variation(const ParticleMeasure& mu);

/// Wasserstein-1 distance of two 1D non-negative measures with equal mass,
/// computed exactly as int |F_mu - F_nu| over the merged breakpoints.
/// Throws std::invalid_argument for d != 1, negative weights, or a mass
/// mismatch above 1e-9 (relative to max(1, mass)).
double w1_distance_1d(const ParticleMeasure& mu, const ParticleMeasure& nu);

}  // namespace charflow
