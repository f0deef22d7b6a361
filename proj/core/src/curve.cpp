#include "charflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace charflow {

TimeGrid::TimeGrid(double horizon, std::size_t steps)
    : horizon_(horizon), steps_(steps), step_(0.0) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
  }
  if (steps == 0) throw std::invalid_argument("TimeGrid: need at least one step");
  step_ = horizon / static_cast<double>(steps);
}

double TimeGrid::time(std::size_t i) const {
  if (i >= steps_) return i == steps_ ? horizon_ : static_cast<double>(i) * step_;
  return static_cast<double>(i) * step_;
}

Curve::Curve(TimeGrid grid, std::size_t dim, std::vector<double> samples)
    : grid_(grid), dim_(dim), samples_(std::move(samples)) {
  if (dim == 0) throw std::invalid_argument("Curve: dimension must be positive");
  if (samples_.size() != grid_.nodes() * dim_) {
    throw std::invalid_argument("Curve: expected " + std::to_string(grid_.nodes() * dim_) +
                                " coordinates, got " + std::to_string(samples_.size()));
  }
}

std::vector<double> Curve::at(double t) const {
  const double h = grid_.step();
  const double clamped = std::clamp(t, 0.0, grid_.horizon());
  std::size_t i = std::min(static_cast<std::size_t>(clamped / h), grid_.steps() - 1);
  const double theta = std::clamp((clamped - grid_.time(i)) / h, 0.0, 1.0);
  std::vector<double> out(dim_);
  auto a = sample(i);
  auto b = sample(i + 1);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = a[k] + theta * (b[k] - a[k]);
  return out;
}

Curve integrate_euler(const BoundedField& field, std::span<const double> x0,
                      const TimeGrid& grid) {
  const std::size_t d = field.dimension();
  if (x0.size() != d) throw std::invalid_argument("integrate_euler: start point dimension");
  std::vector<double> samples(grid.nodes() * d);
  std::copy(x0.begin(), x0.end(), samples.begin());
  std::vector<double> v(d);
  const double h = grid.step();
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    std::span<const double> cur(samples.data() + i * d, d);
    field.evaluate(grid.time(i), cur, v);
    for (std::size_t a = 0; a < d; ++a) samples[(i + 1) * d + a] = cur[a] + h * v[a];
  }
  return Curve(grid, d, std::move(samples));
}

double sup_distance(const Curve& a, const Curve& b) {
  if (a.grid() != b.grid() || a.dimension() != b.dimension()) {
    throw std::invalid_argument("sup_distance: curves live on different grids");
  }
  double best = 0.0;
  std::vector<double> diff(a.dimension());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a.dimension(); ++k) diff[k] = a.sample(i)[k] - b.sample(i)[k];
    best = std::max(best, euclidean_norm(diff));
  }
  return best;
}

PicardResult integrate_picard(const BoundedField& field, std::span<const double> x0,
                              const TimeGrid& grid, std::size_t max_iter, double tol) {
  const std::size_t d = field.dimension();
  if (x0.size() != d) throw std::invalid_argument("integrate_picard: start point dimension");
  if (max_iter == 0) throw std::invalid_argument("integrate_picard: max_iter must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("integrate_picard: tol must be >= 0");

  const std::size_t nodes = grid.nodes();
  const double h = grid.step();
  std::vector<double> previous(nodes * d);
  for (std::size_t i = 0; i < nodes; ++i) std::copy(x0.begin(), x0.end(), previous.begin() + i * d);

  std::vector<double> velocity(nodes * d);
  std::vector<double> next(nodes * d);
  double distance = 0.0;
  for (std::size_t k = 1; k <= max_iter; ++k) {
    for (std::size_t i = 0; i < nodes; ++i) {
      field.evaluate(grid.time(i), std::span<const double>(previous.data() + i * d, d),
                     std::span<double>(velocity.data() + i * d, d));
    }
    std::copy(x0.begin(), x0.end(), next.begin());
    for (std::size_t i = 0; i < grid.steps(); ++i) {
      for (std::size_t a = 0; a < d; ++a) {
        next[(i + 1) * d + a] =
            next[i * d + a] + 0.5 * h * (velocity[i * d + a] + velocity[(i + 1) * d + a]);
      }
    }
    Curve newer(grid, d, next);
    distance = sup_distance(newer, Curve(grid, d, previous));
    previous.swap(next);
    if (distance <= tol) {
      return PicardResult{std::move(newer), distance, k - 1, true};
    }
  }
  return PicardResult{Curve(grid, d, std::move(previous)), distance, max_iter, false};
}

namespace {

// Running residual over nodes 0..last; calls visit(i, residual) for each.
template <class Visit>
void walk_residual(const BoundedField& field, const Curve& curve, std::size_t last,
                   Visit&& visit) {
  const std::size_t d = curve.dimension();
  if (d != field.dimension()) throw std::invalid_argument("residual: dimension mismatch");
  const TimeGrid& grid = curve.grid();
  const double h = grid.step();
  std::vector<double> integral(d, 0.0);
  std::vector<double> v(d);
  std::vector<double> residual(d);
  auto start = curve.sample(0);
  for (std::size_t i = 0; i <= last; ++i) {
    auto cur = curve.sample(i);
    for (std::size_t a = 0; a < d; ++a) residual[a] = (cur[a] - start[a]) - integral[a];
    visit(i, std::span<const double>(residual));
    if (i == last) break;
    field.evaluate(grid.time(i), cur, v);
    for (std::size_t a = 0; a < d; ++a) integral[a] += h * v[a];
  }
}

}  // namespace

std::vector<double> integral_residual(const BoundedField& field, const Curve& curve,
                                      std::size_t i) {
  if (i > curve.grid().steps()) {
    throw std::out_of_range("integral_residual: index " + std::to_string(i) + " beyond N = " +
                            std::to_string(curve.grid().steps()));
  }
  std::vector<double> out;
  walk_residual(field, curve, i, [&](std::size_t j, std::span<const double> r) {
    if (j == i) out.assign(r.begin(), r.end());
  });
  return out;
}

MembershipResult is_integral_curve(const BoundedField& field, const Curve& curve, double tol) {
  MembershipResult result;
  walk_residual(field, curve, curve.grid().steps(),
                [&](std::size_t j, std::span<const double> r) {
                  const double n = euclidean_norm(r);
                  if (n > result.max_residual) {
                    result.max_residual = n;
                    result.worst_index = j;
                  }
                });
  result.is_integral = result.max_residual <= tol;
  return result;
}

double lipschitz_constant(const Curve& curve) {
  const std::size_t d = curve.dimension();
  const double h = curve.grid().step();
  std::vector<double> diff(d);
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) diff[a] = curve.sample(i + 1)[a] - curve.sample(i)[a];
    best = std::max(best, euclidean_norm(diff) / h);
  }
  return best;
}

Curve subsample(const Curve& curve, std::size_t stride) {
  const TimeGrid& grid = curve.grid();
  if (stride == 0 || grid.steps() % stride != 0) {
    throw std::invalid_argument("subsample: stride must divide the step count");
  }
  TimeGrid coarse(grid.horizon(), grid.steps() / stride);
  const std::size_t d = curve.dimension();
  std::vector<double> samples;
  samples.reserve(coarse.nodes() * d);
  for (std::size_t i = 0; i < coarse.nodes(); ++i) {
    auto s = curve.sample(i * stride);
    samples.insert(samples.end(), s.begin(), s.end());
  }
  return Curve(coarse, d, std::move(samples));
}

}  // namespace charflow
