#include "charflow/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>
#include <string>

namespace charflow {

namespace {

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

bool all_nonnegative(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
}

bool bitwise_equal(std::span<const double> a, std::span<const double> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

ParticleMeasure::ParticleMeasure(std::size_t dim)
    : ParticleMeasure(dim, std::vector<double>{}, std::vector<double>{}) {}

ParticleMeasure::ParticleMeasure(std::size_t dim, std::vector<double> points,
                                 std::vector<double> weights)
    : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("ParticleMeasure: dimension must be positive");
  if (points.size() != weights.size() * dim) {
    throw std::invalid_argument("ParticleMeasure: " + std::to_string(weights.size()) +
                                " weights but " + std::to_string(points.size()) +
                                " coordinates in dimension " + std::to_string(dim));
  }
  if (!all_finite(points) || !all_finite(weights)) {
    throw std::invalid_argument("ParticleMeasure: non-finite point or weight");
  }
  nonnegative_ = all_nonnegative(weights);
  points_ = std::make_shared<const std::vector<double>>(std::move(points));
  weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
}

ParticleMeasure::ParticleMeasure(std::size_t dim,
                                 std::shared_ptr<const std::vector<double>> points,
                                 std::shared_ptr<const std::vector<double>> weights,
                                 bool nonnegative)
    : dim_(dim), points_(std::move(points)), weights_(std::move(weights)),
      nonnegative_(nonnegative) {}

double ParticleMeasure::total_mass() const {
  return std::accumulate(weights_->begin(), weights_->end(), 0.0);
}

ParticleMeasure ParticleMeasure::with_points(std::vector<double> points) const {
  if (points.size() != points_->size()) {
    throw std::invalid_argument("ParticleMeasure::with_points: coordinate count changed");
  }
  if (!all_finite(points)) throw std::invalid_argument("ParticleMeasure: non-finite point");
  return ParticleMeasure(dim_, std::make_shared<const std::vector<double>>(std::move(points)),
                         weights_, nonnegative_);
}

ParticleMeasure ParticleMeasure::with_weights(std::vector<double> weights) const {
  if (weights.size() != weights_->size()) {
    throw std::invalid_argument("ParticleMeasure::with_weights: particle count changed");
  }
  if (!all_finite(weights)) throw std::invalid_argument("ParticleMeasure: non-finite weight");
  const bool nonneg = all_nonnegative(weights);
  return ParticleMeasure(dim_, points_,
                         std::make_shared<const std::vector<double>>(std::move(weights)), nonneg);
}

bool operator==(const ParticleMeasure& a, const ParticleMeasure& b) {
  return a.dim_ == b.dim_ && bitwise_equal(*a.points_, *b.points_) &&
         bitwise_equal(*a.weights_, *b.weights_);
}

ParticleMeasure pushforward(const ParticleMeasure& mu, const PointMap& map,
                            std::size_t out_dim) {
  const std::size_t din = mu.dimension();
  const std::size_t dout = out_dim == 0 ? din : out_dim;
  std::vector<double> mapped(mu.size() * dout);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    std::span<double> out(mapped.data() + j * dout, dout);
    try {
      map(mu.point(j), out);
    } catch (const std::exception& e) {
      throw std::runtime_error("pushforward: map failed on particle " + std::to_string(j) +
                               ": " + e.what());
    }
    if (!all_finite(out)) {
      throw std::runtime_error("pushforward: map produced a non-finite image for particle " +
                               std::to_string(j));
    }
  }
  if (dout == din) return mu.with_points(std::move(mapped));
  std::vector<double> w(mu.weights().begin(), mu.weights().end());
  return ParticleMeasure(dout, std::move(mapped), std::move(w));
}

CurveMeasure::CurveMeasure(TimeGrid grid, std::size_t dim)
    : CurveMeasure(grid, dim, {}, {}) {}

CurveMeasure::CurveMeasure(TimeGrid grid, std::size_t dim, std::vector<Curve> curves,
                           std::vector<double> weights)
    : grid_(grid), dim_(dim), curves_(std::move(curves)) {
  if (curves_.size() != weights.size()) {
    throw std::invalid_argument("CurveMeasure: curve and weight counts differ");
  }
  for (std::size_t k = 0; k < curves_.size(); ++k) {
    if (curves_[k].grid() != grid_ || curves_[k].dimension() != dim_) {
      throw std::invalid_argument("CurveMeasure: curve " + std::to_string(k) +
                                  " does not share the measure's grid");
    }
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
      throw std::invalid_argument("CurveMeasure: weight " + std::to_string(k) +
                                  " is negative or non-finite");
    }
  }
  weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
}

double CurveMeasure::total_mass() const {
  return std::accumulate(weights_->begin(), weights_->end(), 0.0);
}

CurveMeasure CurveMeasure::with_weights(std::vector<double> weights) const {
  return CurveMeasure(grid_, dim_, curves_, std::move(weights));
}

bool operator==(const CurveMeasure& a, const CurveMeasure& b) {
  return a.grid_ == b.grid_ && a.dim_ == b.dim_ && a.curves_ == b.curves_ &&
         bitwise_equal(*a.weights_, *b.weights_);
}

ParticleMeasure evaluate_curves(const CurveMeasure& eta, std::size_t i) {
  if (i > eta.grid().steps()) {
    throw std::out_of_range("evaluate_curves: index " + std::to_string(i) + " beyond N = " +
                            std::to_string(eta.grid().steps()));
  }
  const std::size_t d = eta.dimension();
  auto points = std::make_shared<std::vector<double>>();
  points->reserve(eta.size() * d);
  for (const Curve& c : eta.curves_) {
    auto s = c.sample(i);
    points->insert(points->end(), s.begin(), s.end());
  }
  return ParticleMeasure(d, std::move(points), eta.weights_, true);
}

CurveMeasure map_curves(const CurveMeasure& eta, const PointMap& map) {
  const std::size_t d = eta.dimension();
  std::vector<Curve> mapped;
  mapped.reserve(eta.size());
  for (const Curve& c : eta.curves()) {
    std::vector<double> samples(c.samples().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      map(c.sample(i), std::span<double>(samples.data() + i * d, d));
    }
    mapped.emplace_back(eta.grid(), d, std::move(samples));
  }
  return CurveMeasure(eta.grid(), d, std::move(mapped),
                      std::vector<double>(eta.weights().begin(), eta.weights().end()));
}

double total_variation(const ParticleMeasure& mu) {
  double sum = 0.0;
  for (double w : mu.weights()) sum += std::abs(w);
  return sum;
}

double w1_distance_1d(const ParticleMeasure& mu, const ParticleMeasure& nu) {
  if (mu.dimension() != 1 || nu.dimension() != 1) {
    throw std::invalid_argument("w1_distance_1d: measures must be one-dimensional");
  }
  if (!mu.nonnegative() || !nu.nonnegative()) {
    throw std::invalid_argument("w1_distance_1d: nonnegative measure required");
  }
  const double mass_mu = mu.total_mass();
  const double mass_nu = nu.total_mass();
  if (std::abs(mass_mu - mass_nu) > 1e-9 * std::max(1.0, std::max(mass_mu, mass_nu))) {
    throw std::invalid_argument("w1_distance_1d: total masses differ");
  }
  // Signed atoms: +w for mu, -w for nu, swept left to right.
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(mu.size() + nu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) atoms.emplace_back(mu.point(j)[0], mu.weights()[j]);
  for (std::size_t j = 0; j < nu.size(); ++j) atoms.emplace_back(nu.point(j)[0], -nu.weights()[j]);
  std::sort(atoms.begin(), atoms.end());
  double cdf_gap = 0.0;
  double distance = 0.0;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) {
    cdf_gap += atoms[k].second;
    distance += std::abs(cdf_gap) * (atoms[k + 1].first - atoms[k].first);
  }
  return distance;
}

}  // namespace charflow
