#include "charflow/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace charflow {

TestFunction::TestFunction(std::vector<double> center, double radius, TimeProfile profile,
                           double horizon)
    : center_(std::move(center)), radius_(radius), profile_(profile), horizon_(horizon) {
  if (center_.empty()) throw std::invalid_argument("TestFunction: empty centre");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw std::invalid_argument("TestFunction: radius must be positive and finite");
  }
  if (!(horizon_ > 0.0)) throw std::invalid_argument("TestFunction: horizon must be positive");
}

double TestFunction::psi(double t) const {
  return profile_ == TimeProfile::kConstant ? 1.0 : std::cos(std::numbers::pi * t / horizon_);
}

double TestFunction::psi_prime(double t) const {
  if (profile_ == TimeProfile::kConstant) return 0.0;
  const double k = std::numbers::pi / horizon_;
  return -k * std::sin(k * t);
}

double TestFunction::scaled_distance(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t a = 0; a < center_.size(); ++a) {
    const double dx = x[a] - center_[a];
    sum += dx * dx;
  }
  return sum / (radius_ * radius_);
}

bool TestFunction::supports(std::span<const double> x) const { return scaled_distance(x) < 1.0; }

double TestFunction::value(double t, std::span<const double> x) const {
  const double s = scaled_distance(x);
  if (s >= 1.0) return 0.0;
  return psi(t) * (1.0 - s) * (1.0 - s);
}

double TestFunction::time_derivative(double t, std::span<const double> x) const {
  const double s = scaled_distance(x);
  if (s >= 1.0) return 0.0;
  return psi_prime(t) * (1.0 - s) * (1.0 - s);
}

void TestFunction::gradient(double t, std::span<const double> x, std::span<double> out) const {
  const double s = scaled_distance(x);
  if (s >= 1.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double factor = -4.0 * psi(t) * (1.0 - s) / (radius_ * radius_);
  for (std::size_t a = 0; a < center_.size(); ++a) out[a] = factor * (x[a] - center_[a]);
}

double TestFunction::transport_derivative(double t, std::span<const double> x,
                                          std::span<const double> v) const {
  const double s = scaled_distance(x);
  if (s >= 1.0) return 0.0;
  const double one_minus = 1.0 - s;
  double drift = 0.0;
  for (std::size_t a = 0; a < center_.size(); ++a) drift += v[a] * (x[a] - center_[a]);
  return psi_prime(t) * one_minus * one_minus -
         4.0 * psi(t) * one_minus * drift / (radius_ * radius_);
}

MeasureFamily::MeasureFamily(TimeGrid grid, std::vector<ParticleMeasure> slices)
    : grid_(grid), initial_(slices.empty() ? ParticleMeasure() : slices.front()),
      slices_(std::move(slices)) {
  if (slices_.size() != grid_.nodes()) {
    throw std::invalid_argument("MeasureFamily: expected " + std::to_string(grid_.nodes()) +
                                " slices, got " + std::to_string(slices_.size()));
  }
  for (const ParticleMeasure& s : slices_) {
    if (s.dimension() != initial_.dimension()) {
      throw std::invalid_argument("MeasureFamily: slices of different dimensions");
    }
  }
}

MeasureFamily::MeasureFamily(TimeGrid grid, ParticleMeasure initial,
                             std::vector<ParticleMeasure> slices)
    : MeasureFamily(grid, std::move(slices)) {
  if (!(initial == slices_.front())) {
    throw std::invalid_argument("MeasureFamily: slice 0 must equal the initial datum");
  }
  initial_ = std::move(initial);
}

MeasureFamily MeasureFamily::with_slice(std::size_t i, ParticleMeasure slice) const {
  if (i == 0 || i >= slices_.size()) {
    throw std::out_of_range("MeasureFamily::with_slice: index must lie in 1..N");
  }
  std::vector<ParticleMeasure> copy = slices_;
  copy[i] = std::move(slice);
  return MeasureFamily(grid_, initial_, std::move(copy));
}

MeasureFamily forward_solution(const BoundedField& field, const ParticleMeasure& mu0,
                               const TimeGrid& grid) {
  const std::size_t d = field.dimension();
  if (mu0.dimension() != d) {
    throw std::invalid_argument("forward_solution: measure and field dimensions differ");
  }
  const double h = grid.step();
  std::vector<ParticleMeasure> slices;
  slices.reserve(grid.nodes());
  slices.push_back(mu0);
  std::vector<double> v(d);
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    const ParticleMeasure& cur = slices.back();
    std::vector<double> next(cur.points().begin(), cur.points().end());
    const double t = grid.time(i);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      auto x = cur.point(j);
      field.evaluate(t, x, v);
      for (std::size_t a = 0; a < d; ++a) next[j * d + a] = x[a] + h * v[a];
    }
    slices.push_back(mu0.with_points(std::move(next)));
  }
  return MeasureFamily(grid, mu0, std::move(slices));
}

MeasureFamily dirac_family(const Curve& curve) {
  std::vector<ParticleMeasure> slices;
  slices.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    auto s = curve.sample(i);
    slices.emplace_back(curve.dimension(), std::vector<double>(s.begin(), s.end()),
                        std::vector<double>{1.0});
  }
  return MeasureFamily(curve.grid(), std::move(slices));
}

std::vector<std::vector<double>> residual_table(const MeasureFamily& family,
                                                const BoundedField& field,
                                                std::span<const TestFunction> battery) {
  const std::size_t d = family.dimension();
  if (field.dimension() != d) {
    throw std::invalid_argument("residual_table: family and field dimensions differ");
  }
  for (const TestFunction& phi : battery) {
    if (phi.center().size() != d) {
      throw std::invalid_argument("residual_table: test function dimension mismatch");
    }
  }
  const TimeGrid& grid = family.grid();
  const double h = grid.step();
  const std::size_t count = battery.size();

  std::vector<double> initial_pairing(count, 0.0);
  {
    const ParticleMeasure& mu = family.initial();
    for (std::size_t j = 0; j < mu.size(); ++j) {
      for (std::size_t k = 0; k < count; ++k) {
        initial_pairing[k] += mu.weights()[j] * battery[k].value(0.0, mu.point(j));
      }
    }
  }

  std::vector<std::vector<double>> table(count, std::vector<double>(grid.nodes(), 0.0));
  std::vector<double> integral(count, 0.0);
  std::vector<double> pairing(count);
  std::vector<double> bracket(count);
  std::vector<double> v(d);
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    const ParticleMeasure& mu = family.slice(i);
    const double t = grid.time(i);
    const bool last = i == grid.steps();
    std::fill(pairing.begin(), pairing.end(), 0.0);
    std::fill(bracket.begin(), bracket.end(), 0.0);
    for (std::size_t j = 0; j < mu.size(); ++j) {
      auto x = mu.point(j);
      const double w = mu.weights()[j];
      bool have_velocity = false;
      for (std::size_t k = 0; k < count; ++k) {
        const TestFunction& phi = battery[k];
        if (!phi.supports(x)) continue;
        pairing[k] += w * phi.value(t, x);
        if (last) continue;
        if (!have_velocity) {
          field.evaluate(t, x, v);
          have_velocity = true;
        }
        bracket[k] += w * phi.transport_derivative(t, x, v);
      }
    }
    for (std::size_t k = 0; k < count; ++k) {
      table[k][i] = pairing[k] - initial_pairing[k] - integral[k];
      integral[k] += h * bracket[k];
    }
  }
  // R(phi, t_0) is zero by definition; the pairing difference above may round.
  for (auto& row : table) row[0] = 0.0;
  return table;
}

double weak_residual(const MeasureFamily& family, const BoundedField& field,
                     const TestFunction& phi, std::size_t i) {
  if (i > family.grid().steps()) {
    throw std::out_of_range("weak_residual: index " + std::to_string(i) + " beyond N = " +
                            std::to_string(family.grid().steps()));
  }
  return residual_table(family, field, std::span<const TestFunction>(&phi, 1))[0][i];
}

VerificationReport verify_weak_solution(const MeasureFamily& family, const BoundedField& field,
                                        std::span<const TestFunction> battery, double tol) {
  if (battery.empty()) throw std::invalid_argument("verify_weak_solution: empty battery");
  const auto table = residual_table(family, field, battery);
  VerificationReport report;
  report.tol = tol;
  report.residual_by_time.assign(family.grid().nodes(), 0.0);
  for (std::size_t k = 0; k < table.size(); ++k) {
    for (std::size_t i = 0; i < table[k].size(); ++i) {
      const double r = std::abs(table[k][i]);
      report.residual_by_time[i] = std::max(report.residual_by_time[i], r);
      if (r > report.max_residual) {
        report.max_residual = r;
        report.worst_phi = k;
        report.worst_time_index = i;
      }
    }
  }
  report.pass = report.max_residual <= tol;
  return report;
}

std::vector<TestFunction> default_battery(std::span<const double> lower,
                                          std::span<const double> upper,
                                          std::size_t count_per_axis, double bound,
                                          double horizon) {
  const std::size_t d = lower.size();
  if (d == 0 || upper.size() != d) throw std::invalid_argument("default_battery: box dimension");
  if (count_per_axis == 0) throw std::invalid_argument("default_battery: need >= 1 centre");
  const double inflate = bound * horizon;
  std::vector<double> lo(d), spacing(d);
  double max_spacing = 0.0;
  for (std::size_t a = 0; a < d; ++a) {
    if (!(lower[a] <= upper[a])) throw std::invalid_argument("default_battery: empty box");
    lo[a] = lower[a] - inflate;
    const double len = upper[a] - lower[a] + 2.0 * inflate;
    spacing[a] = count_per_axis > 1 ? len / static_cast<double>(count_per_axis - 1) : len;
    max_spacing = std::max(max_spacing, spacing[a]);
  }
  if (!(max_spacing > 0.0)) throw std::invalid_argument("default_battery: degenerate box");
  const double radius = 2.0 * max_spacing;

  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= count_per_axis;
  std::vector<TestFunction> battery;
  battery.reserve(2 * total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> center(d);
    std::size_t rest = flat;
    for (std::size_t a = d; a-- > 0;) {
      const std::size_t k = rest % count_per_axis;
      rest /= count_per_axis;
      center[a] = count_per_axis > 1 ? lo[a] + static_cast<double>(k) * spacing[a]
                                     : 0.5 * (lower[a] + upper[a]);
    }
    battery.emplace_back(center, radius, TimeProfile::kConstant, horizon);
    battery.emplace_back(std::move(center), radius, TimeProfile::kCosine, horizon);
  }
  return battery;
}

std::vector<double> euler_flow(const BoundedField& field, std::span<const double> x0,
                               const TimeGrid& grid) {
  const std::size_t d = field.dimension();
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> v(d);
  const double h = grid.step();
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    field.evaluate(grid.time(i), x, v);
    for (std::size_t a = 0; a < d; ++a) x[a] += h * v[a];
  }
  return x;
}

namespace {

double determinant(std::vector<double> m, std::size_t n) {
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    }
    if (m[pivot * n + col] == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      det = -det;
    }
    det *= m[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

}  // namespace

ClassicalDensity classical_density(const BoundedField& field, const DensityFn& u0,
                                   const TimeGrid& grid, std::span<const double> x,
                                   double probe) {
  const std::size_t d = field.dimension();
  if (x.size() != d) throw std::invalid_argument("classical_density: point dimension");
  if (!(probe > 0.0) || !std::isfinite(probe)) {
    throw std::invalid_argument("classical_density: probe must be positive");
  }
  switch (field.kind()) {
    case FieldKind::kConstant:
    case FieldKind::kSmooth1d:
      break;
    case FieldKind::kClampedRotation:
      if (!(euclidean_norm(x) < field.spec().radius)) {
        throw std::invalid_argument(
            "classical_density: clamped_rotation is only smooth inside the clamp radius");
      }
      break;
    default:
      throw std::invalid_argument("classical_density: field '" + std::string(field.id()) +
                                  "' has no differentiable flow");
  }

  // Backward characteristic: z' = -b(T - s, z), s in [0, T].
  const double h = grid.step();
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> v(d);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    field.evaluate(grid.time(grid.steps() - k), y, v);
    for (std::size_t a = 0; a < d; ++a) y[a] -= h * v[a];
  }

  std::vector<double> jac(d * d);
  std::vector<double> probe_point(d);
  for (std::size_t c = 0; c < d; ++c) {
    probe_point = y;
    probe_point[c] = y[c] + probe;
    const auto plus = euler_flow(field, probe_point, grid);
    probe_point[c] = y[c] - probe;
    const auto minus = euler_flow(field, probe_point, grid);
    for (std::size_t r = 0; r < d; ++r) jac[r * d + c] = (plus[r] - minus[r]) / (2.0 * probe);
  }
  const double det = determinant(jac, d);
  if (std::abs(det) < 1e-8) {
    throw std::runtime_error("classical_density: singular flow Jacobian");
  }
  return ClassicalDensity{u0(y) / det, std::move(y), det};
}

}  // namespace charflow
