#include "charflow/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <string>

namespace charflow {

namespace {

constexpr std::size_t kMaxContinuationSteps = 10;

void require_1d(const BoundedField& field, const char* who) {
  if (field.dimension() != 1) {
    throw std::invalid_argument(std::string(who) + ": one-dimensional field required");
  }
}

double point_value(const BoundedField& field, double t, double x) {
  double v = 0.0;
  field.evaluate(t, std::span<const double>(&x, 1), std::span<double>(&v, 1));
  return v;
}

class PathSearch {
 public:
  PathSearch(const BoundedField& field, double x0, const TimeGrid& grid,
             std::span<const double> alphabet, std::size_t substeps)
      : field_(field), x0_(x0), grid_(grid), alphabet_(alphabet), substeps_(substeps),
        path_(grid.steps()) {}

  // Exhaustive search below a fixed first slope.
  SlopePathOracleResult run(std::size_t first) {
    best_.min_max_residual = std::numeric_limits<double>::infinity();
    path_[0] = alphabet_[first];
    const double sum = alphabet_[first];
    const double g = increment(0, 0.0, sum);
    visit(1, sum, g, std::abs(g));
    return best_;
  }

 private:
  double increment(std::size_t i, double sum_before, double sum_after) const {
    const double h = grid_.step();
    const double a = x0_ + h * sum_before;
    const double b = x0_ + h * sum_after;
    return (b - a) - segment_integral(field_, grid_.time(i), h, a, b, substeps_);
  }

  void visit(std::size_t depth, double sum, double g, double running_max) {
    if (depth == grid_.steps()) {
      ++best_.paths_searched;
      if (running_max < best_.min_max_residual) {
        best_.min_max_residual = running_max;
        best_.argmin_path = path_;
      }
      return;
    }
    for (double s : alphabet_) {
      path_[depth] = s;
      const double next_sum = sum + s;
      const double next_g = g + increment(depth, sum, next_sum);
      visit(depth + 1, next_sum, next_g, std::max(running_max, std::abs(next_g)));
    }
  }

  const BoundedField& field_;
  double x0_;
  TimeGrid grid_;
  std::span<const double> alphabet_;
  std::size_t substeps_;
  std::vector<double> path_;
  SlopePathOracleResult best_;
};

}  // namespace

double segment_integral(const BoundedField& field, double t0, double h, double a, double b,
                        std::size_t substeps) {
  require_1d(field, "segment_integral");
  const FieldKind kind = field.kind();
  const bool exact = kind == FieldKind::kSign || kind == FieldKind::kFixedSign ||
                     kind == FieldKind::kFatCantor;
  if (exact) {
    if (a == b) return h * point_value(field, t0, a);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double span = hi - lo;
    if (kind == FieldKind::kFatCantor) return h * (field.cantor_set()->measure_within(lo, hi) / span);
    // {x = 0} has zero preimage measure on a non-constant segment
    const double positive = lo >= 0.0 ? 1.0 : (hi <= 0.0 ? 0.0 : hi / span);
    const double negative = hi <= 0.0 ? 1.0 : (lo >= 0.0 ? 0.0 : -lo / span);
    return h * (negative - positive);
  }
  if (substeps == 0) throw std::invalid_argument("segment_integral: substeps must be >= 1");
  const double m = static_cast<double>(substeps);
  double sum = 0.0;
  for (std::size_t k = 0; k < substeps; ++k) {
    const double theta = (static_cast<double>(k) + 0.5) / m;
    sum += point_value(field, t0 + theta * h, a + theta * (b - a));
  }
  return h * sum / m;
}

double exact_max_residual(const BoundedField& field, const Curve& curve, std::size_t substeps) {
  require_1d(field, "exact_max_residual");
  if (curve.dimension() != 1) throw std::invalid_argument("exact_max_residual: 1D curve required");
  const TimeGrid& grid = curve.grid();
  const double h = grid.step();
  double g = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    const double a = curve.sample(i)[0];
    const double b = curve.sample(i + 1)[0];
    g += (b - a) - segment_integral(field, grid.time(i), h, a, b, substeps);
    worst = std::max(worst, std::abs(g));
  }
  return worst;
}

double path_max_residual(const BoundedField& field, double x0, const TimeGrid& grid,
                         std::span<const double> slopes, std::size_t substeps) {
  require_1d(field, "path_max_residual");
  if (slopes.size() != grid.steps()) {
    throw std::invalid_argument("path_max_residual: one slope per step required");
  }
  const double h = grid.step();
  double sum = 0.0;
  double g = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const double a = x0 + h * sum;
    sum += slopes[i];
    const double b = x0 + h * sum;
    g += (b - a) - segment_integral(field, grid.time(i), h, a, b, substeps);
    worst = std::max(worst, std::abs(g));
  }
  return worst;
}

SlopePathOracleResult slope_path_oracle(const BoundedField& field, double x0,
                                        const TimeGrid& grid, std::vector<double> alphabet,
                                        std::size_t substeps, std::uint64_t budget) {
  require_1d(field, "slope_path_oracle");
  if (!std::isfinite(x0)) throw std::invalid_argument("slope_path_oracle: x0 must be finite");
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  if (alphabet.empty()) throw std::invalid_argument("slope_path_oracle: empty slope alphabet");
  for (double s : alphabet) {
    if (!(std::abs(s) <= field.bound())) {
      throw std::invalid_argument("slope_path_oracle: slope " + std::to_string(s) +
                                  " outside [-M, M]");
    }
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    if (total > budget / alphabet.size()) {
      throw std::length_error("slope_path_oracle: search budget exceeded (" +
                              std::to_string(alphabet.size()) + "^" +
                              std::to_string(grid.steps()) + " paths)");
    }
    total *= alphabet.size();
  }

  std::vector<std::future<SlopePathOracleResult>> branches;
  branches.reserve(alphabet.size());
  for (std::size_t first = 0; first < alphabet.size(); ++first) {
    branches.push_back(std::async(std::launch::async, [&, first] {
      PathSearch search(field, x0, grid, alphabet, substeps);
      return search.run(first);
    }));
  }
  // Branches are merged in alphabet order and only a strict improvement wins,
  // which keeps the lexicographically smallest minimizer.
  SlopePathOracleResult result;
  result.min_max_residual = std::numeric_limits<double>::infinity();
  for (auto& branch : branches) {
    SlopePathOracleResult r = branch.get();
    result.paths_searched += r.paths_searched;
    if (r.min_max_residual < result.min_max_residual) {
      result.min_max_residual = r.min_max_residual;
      result.argmin_path = std::move(r.argmin_path);
    }
  }
  return result;
}

std::vector<TestFunction> stationary_battery(double radius, double bound, double horizon,
                                             std::size_t centers) {
  const double room = radius - bound * horizon;
  if (!(room > 0.0)) {
    throw std::invalid_argument("stationary_battery: truncation radius must exceed M T");
  }
  if (centers == 0) throw std::invalid_argument("stationary_battery: need >= 1 centre");
  const double r = 0.45 * room;
  std::vector<TestFunction> battery;
  battery.reserve(2 * centers);
  for (std::size_t k = 0; k < centers; ++k) {
    const double c = centers == 1 ? 0.0
                                  : -0.5 * room + room * static_cast<double>(k) /
                                                      static_cast<double>(centers - 1);
    battery.emplace_back(std::vector<double>{c}, r, TimeProfile::kConstant, horizon);
    battery.emplace_back(std::vector<double>{c}, r, TimeProfile::kCosine, horizon);
  }
  return battery;
}

StationaryScenario signed_stationary_scenario(double radius, std::size_t per_side,
                                              const TimeGrid& grid, double tol,
                                              StationaryVariant variant,
                                              std::span<const TestFunction> battery) {
  if (per_side == 0) throw std::invalid_argument("signed_stationary_scenario: per_side >= 1");
  const BoundedField field = make_field(default_spec(FieldKind::kSign));
  const double room = radius - field.bound() * grid.horizon();
  std::vector<TestFunction> owned;
  if (battery.empty()) {
    owned = stationary_battery(radius, field.bound(), grid.horizon());
    battery = owned;
  }
  for (const TestFunction& phi : battery) {
    if (phi.center().size() != 1 || !(std::abs(phi.center()[0]) + phi.radius() < room)) {
      throw std::invalid_argument(
          "signed_stationary_scenario: battery support too wide for R - M T");
    }
  }

  const double spacing = radius / static_cast<double>(per_side);
  std::vector<double> points;
  std::vector<double> weights;
  points.reserve(2 * per_side);
  weights.reserve(2 * per_side);
  for (std::size_t k = per_side; k-- > 0;) {
    points.push_back(-(static_cast<double>(k) + 0.5) * spacing);
    weights.push_back(variant == StationaryVariant::kSigned ? -spacing : spacing);
  }
  for (std::size_t k = 0; k < per_side; ++k) {
    points.push_back((static_cast<double>(k) + 0.5) * spacing);
    weights.push_back(spacing);
  }
  const ParticleMeasure mu0(1, std::move(points), std::move(weights));
  std::vector<ParticleMeasure> slices(grid.nodes(), mu0);
  const MeasureFamily family(grid, mu0, std::move(slices));

  StationaryScenario out;
  out.report = verify_weak_solution(family, field, battery, tol);
  out.step = grid.step();
  out.spacing = spacing;
  out.particles = 2 * per_side;
  out.variant = variant;
  return out;
}

DeadCurveReport dead_curve_demo(const BoundedField& field, double x0, const TimeGrid& grid) {
  if (field.kind() != FieldKind::kSign && field.kind() != FieldKind::kFixedSign) {
    throw std::invalid_argument("dead_curve_demo: sign or fixed_sign field required");
  }
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw std::invalid_argument("dead_curve_demo: x0 must be positive");
  }
  const double h = grid.step();
  DeadCurveReport report;
  report.hit = x0 < grid.horizon();
  if (report.hit) {
    report.hit_index = static_cast<std::size_t>(std::ceil(x0 / h - 1e-9));
    report.hit_time = grid.time(report.hit_index);
  } else {
    report.hit_index = grid.steps();
    report.hit_time = grid.horizon();
  }

  std::vector<double> samples(grid.nodes());
  for (std::size_t i = 0; i < grid.nodes(); ++i) samples[i] = std::max(x0 - grid.time(i), 0.0);
  const Curve stop_at_zero(grid, 1, samples);
  report.rest_residual = exact_max_residual(field, stop_at_zero, 1);

  if (report.hit_index > 0) {
    const TimeGrid prefix_grid(report.hit_time, report.hit_index);
    const Curve prefix(prefix_grid, 1,
                       std::vector<double>(samples.begin(),
                                           samples.begin() + static_cast<std::ptrdiff_t>(
                                                                 report.hit_index + 1)));
    report.pre_hit_residual = exact_max_residual(field, prefix, 1);
  }

  if (report.hit) {
    report.continuation_steps = std::min(grid.steps() - report.hit_index, kMaxContinuationSteps);
    if (report.continuation_steps > 0) {
      const TimeGrid tail(h * static_cast<double>(report.continuation_steps),
                          report.continuation_steps);
      report.continuation_floor =
          slope_path_oracle(field, 0.0, tail, {-1.0, 0.0, 1.0}).min_max_residual;
    }
  }
  return report;
}

}  // namespace charflow
