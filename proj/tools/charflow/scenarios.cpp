#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "charflow/cell_grid.hpp"
#include "charflow/continuity.hpp"
#include "charflow/counterexamples.hpp"
#include "charflow/interval_set.hpp"
#include "charflow/superposition.hpp"

namespace charflow::cli {

namespace {

using io::Json;

// Shortest round-trip decimal form, same as the JSON reports.
std::string num(double x) { return Json(x).dump(); }

class Checks {
 public:
  void add(const std::string& name, bool pass, Json detail = Json::object()) {
    detail["name"] = name;
    detail["pass"] = pass;
    list_.push_back(std::move(detail));
    all_ = all_ && pass;
  }
  bool all() const { return all_; }
  const Json& list() const { return list_; }

 private:
  Json list_ = Json::array();
  bool all_ = true;
};

BoundedField build_field(const FieldSpec& spec) {
  try {
    return make_field(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

TimeGrid build_grid(const ScenarioConfig& c, double horizon, std::size_t steps) {
  return TimeGrid(c.horizon.value_or(horizon), c.steps.value_or(steps));
}

Json field_summary(const BoundedField& f) {
  Json j = io::to_json(f.spec());
  j["dimension"] = f.dimension();
  j["bound"] = f.bound();
  return j;
}

std::vector<double> fill(std::size_t d, double v) { return std::vector<double>(d, v); }

ParticleMeasure build_measure(const ScenarioConfig& c, std::size_t dim, std::vector<double> lo,
                              std::vector<double> hi, std::size_t count) {
  const MeasureConfig& m = c.measure;
  if (m.kind == "file") {
    ParticleMeasure mu = [&] {
      try {
        return io::particle_measure_from_json(io::read_json_file(m.file));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }();
    if (mu.dimension() != dim) throw ConfigError("measure file dimension does not match the field");
    return mu;
  }
  if (m.lower) {
    lo = *m.lower;
    hi = *m.upper;
  }
  if (lo.size() != dim || hi.size() != dim) throw ConfigError("measure box dimension mismatch");
  for (std::size_t a = 0; a < dim; ++a) {
    if (!(lo[a] < hi[a])) throw ConfigError("measure box must be nonempty");
  }
  const std::size_t n = m.count.value_or(count);
  double volume = 1.0;
  for (std::size_t a = 0; a < dim; ++a) volume *= hi[a] - lo[a];

  std::vector<double> points;
  std::vector<double> weights;
  if (m.kind == "random") {
    std::mt19937_64 rng(c.seed);
    points.resize(n * dim);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t a = 0; a < dim; ++a) {
        points[j * dim + a] = std::uniform_real_distribution<double>(lo[a], hi[a])(rng);
      }
    }
    weights.assign(n, m.density * volume / static_cast<double>(n));
  } else {
    std::size_t total = 1;
    for (std::size_t a = 0; a < dim; ++a) total *= n;
    const double w = m.density * volume / static_cast<double>(total);
    points.resize(total * dim);
    for (std::size_t j = 0; j < total; ++j) {
      std::size_t rest = j;
      for (std::size_t a = dim; a-- > 0;) {
        const double k = static_cast<double>(rest % n);
        rest /= n;
        points[j * dim + a] = lo[a] + (k + 0.5) * (hi[a] - lo[a]) / static_cast<double>(n);
      }
      const bool flip = m.negative_half && points[j * dim] < 0.0;
      weights.push_back(flip ? -w : w);
    }
  }
  return ParticleMeasure(dim, std::move(points), std::move(weights));
}

void bounding_box(const ParticleMeasure& mu, std::vector<double>& lo, std::vector<double>& hi) {
  const std::size_t d = mu.dimension();
  lo.assign(d, INFINITY);
  hi.assign(d, -INFINITY);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    for (std::size_t a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], mu.point(j)[a]);
      hi[a] = std::max(hi[a], mu.point(j)[a]);
    }
  }
  if (mu.empty()) throw ConfigError("measure has no particles");
}

std::string residual_csv(const TimeGrid& grid, const std::vector<double>& by_time) {
  std::ostringstream out;
  out << "t,max_residual\n";
  for (std::size_t i = 0; i < by_time.size(); ++i) out << num(grid.time(i)) << ',' << num(by_time[i]) << '\n';
  return out.str();
}

// ---------------------------------------------------------------- transport

ScenarioOutput transport(const ScenarioConfig& c) {
  const BoundedField f = build_field(c.field.value_or(default_spec(FieldKind::kConstant)));
  const TimeGrid grid = build_grid(c, 1.0, 100);
  const std::size_t d = f.dimension();
  const bool rotation = f.kind() == FieldKind::kClampedRotation;
  const ParticleMeasure mu = build_measure(c, d, fill(d, rotation ? -0.5 : 0.0),
                                           fill(d, rotation ? 0.5 : 1.0), d == 1 ? 200 : 20);
  const MeasureFamily family = forward_solution(f, mu, grid);
  const double h = grid.step();

  Checks checks;
  bool mass_ok = true;
  for (const ParticleMeasure& s : family.slices()) mass_ok = mass_ok && s.total_mass() == mu.total_mass();
  checks.add("mass_conserved_bitwise", mass_ok, {{"total_mass", mu.total_mass()}});

  double lip = 0.0;
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    for (std::size_t j = 0; j < mu.size(); ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double dx = family.slice(i + 1).point(j)[a] - family.slice(i).point(j)[a];
        s += dx * dx;
      }
      lip = std::max(lip, std::sqrt(s) / h);
    }
  }
  checks.add("lipschitz_bound", lip <= f.bound() + 1e-12, {{"value", lip}, {"limit", f.bound()}});

  std::vector<double> lo, hi;
  bounding_box(mu, lo, hi);
  const auto battery = default_battery(lo, hi, c.battery, f.bound(), grid.horizon());
  const double tol = c.tol.value_or(10.0 * h);
  const VerificationReport rep = verify_weak_solution(family, f, battery, tol);
  checks.add("weak_solution", rep.pass, {{"value", rep.max_residual}, {"limit", tol}});

  std::ostringstream mass_csv;
  mass_csv << "t,total_mass\n";
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    mass_csv << num(grid.time(i)) << ',' << num(family.slice(i).total_mass()) << '\n';
  }

  ScenarioOutput out;
  out.report["field"] = field_summary(f);
  out.report["grid"] = {{"T", grid.horizon()}, {"N", grid.steps()}, {"h", h}};
  out.report["particles"] = mu.size();
  out.report["battery_size"] = battery.size();
  out.report["verification"] = io::to_json(rep, battery);
  out.report["checks"] = checks.list();
  out.pass = checks.all();
  out.files.emplace_back("residual.csv", residual_csv(grid, rep.residual_by_time));
  out.files.emplace_back("mass.csv", mass_csv.str());
  return out;
}

// ---------------------------------------------------------------- superpose

ScenarioOutput superpose(const ScenarioConfig& c) {
  const BoundedField f = build_field(c.field.value_or(default_spec(FieldKind::kFixedSign)));
  const TimeGrid grid = build_grid(c, 1.0, 100);
  const std::size_t d = f.dimension();
  const ParticleMeasure mu = d == 1 ? build_measure(c, 1, {0.2}, {1.0}, 100)
                                    : build_measure(c, d, fill(d, -0.5), fill(d, 0.5), 20);
  std::vector<double> lo, hi;
  if (c.cell_lower) {
    lo = *c.cell_lower;
    hi = *c.cell_upper;
  } else {
    bounding_box(mu, lo, hi);
    for (std::size_t a = 0; a < d; ++a) {
      const double pad = f.bound() * grid.horizon() + 0.05 * (hi[a] - lo[a]) + 1e-3;
      lo[a] -= pad;
      hi[a] += pad;
    }
  }
  if (lo.size() != d) throw ConfigError("cell box dimension does not match the field");
  const CellGrid cells(lo, hi, std::vector<std::size_t>(d, c.cells.value_or(50)));

  ScenarioOutput out;
  out.report["field"] = field_summary(f);
  out.report["grid"] = {{"T", grid.horizon()}, {"N", grid.steps()}, {"h", grid.step()}};
  out.report["cells"] = {{"lower", lo}, {"upper", hi}, {"count", cells.cell_count()}};

  const TransportPlan plan = build_transitions(f, mu, grid, cells);
  const PathDecomposition dec =
      decompose_paths(plan.transitions, plan.slice_masses.front(), cells, grid);
  const double mass = mu.total_mass();
  const double rel = 1e-9 * std::max(mass, 1e-300);

  Checks checks;
  const ContinuityCheck cont = check_continuity(plan.transitions, plan.slice_masses.front());
  checks.add("discrete_continuity", cont.max_violation <= rel,
             {{"value", cont.max_violation}, {"limit", rel}});

  std::ostringstream marg_csv;
  marg_csv << "t,marginal_error,cell_mass\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.nodes(); ++i) {
    const auto binned = bin_masses(evaluate_curves(dec.eta, i), cells);
    double tv = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < binned.size(); ++k) {
      tv += std::abs(binned[k] - plan.slice_masses[i][k]);
      total += plan.slice_masses[i][k];
    }
    worst = std::max(worst, tv);
    marg_csv << num(grid.time(i)) << ',' << num(tv) << ',' << num(total) << '\n';
  }
  checks.add("marginals_match", worst <= rel, {{"value", worst}, {"limit", rel}});
  const double eta_mass = dec.eta.total_mass();
  checks.add("eta_mass", std::abs(eta_mass - mass) <= rel,
             {{"value", eta_mass}, {"expected", mass}});
  checks.add("rounds_within_edges", dec.rounds <= dec.edge_count,
             {{"rounds", dec.rounds}, {"edges", dec.edge_count}});

  const FlowTable table = select_flow(dec.eta, cells);
  std::vector<double> tripled(dec.eta.weights().begin(), dec.eta.weights().end());
  for (double& w : tripled) w *= 3.0;
  const bool scale_ok = select_flow(dec.eta.with_weights(tripled), cells).same_selection(table);
  std::vector<Curve> reversed(dec.eta.curves().rbegin(), dec.eta.curves().rend());
  std::vector<double> rweights(dec.eta.weights().rbegin(), dec.eta.weights().rend());
  const bool perm_ok =
      select_flow(CurveMeasure(grid, d, std::move(reversed), std::move(rweights)), cells) == table;
  checks.add("selection_invariant", scale_ok && perm_ok,
             {{"scaling", scale_ok}, {"permutation", perm_ok}});

  out.report["decomposition"] = {{"paths", dec.eta.size()},
                                 {"rounds", dec.rounds},
                                 {"edges", dec.edge_count},
                                 {"max_marginal_error", worst},
                                 {"residual_mass", dec.residual_mass}};
  out.report["flow_cells"] = table.cells.size();
  out.report["checks"] = checks.list();
  out.pass = checks.all();
  out.files.emplace_back("eta.json", io::dump(io::to_json(dec.eta)));
  out.files.emplace_back("flow.json", io::dump(io::to_json(table)));
  out.files.emplace_back("marginals.csv", marg_csv.str());
  return out;
}

// ----------------------------------------------------------- counterexamples

std::string path_csv(const BoundedField& f, double x0, const TimeGrid& grid,
                     const std::vector<double>& slopes) {
  std::ostringstream out;
  out << "t,position,residual\n";
  const double h = grid.step();
  double sum = 0.0;
  double g = 0.0;
  out << num(0.0) << ',' << num(x0) << ',' << num(0.0) << '\n';
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const double a = x0 + h * sum;
    sum += slopes[i];
    const double b = x0 + h * sum;
    g += (b - a) - segment_integral(f, grid.time(i), h, a, b, 1);
    out << num(grid.time(i + 1)) << ',' << num(b) << ',' << num(g) << '\n';
  }
  return out.str();
}

ScenarioOutput oracle_scenario(const ScenarioConfig& c, FieldKind kind) {
  FieldSpec spec = c.field.value_or(default_spec(kind));
  if (spec.kind != kind) throw ConfigError(c.name + " requires the " + std::string(field_id(kind)) + " field");
  const BoundedField f = build_field(spec);
  const TimeGrid grid = build_grid(c, 1.0, 10);
  const double x0 = c.x0.value_or(0.0);
  const std::vector<double> alphabet = c.alphabet.value_or(
      kind == FieldKind::kFatCantor ? std::vector<double>{0.0, 1.0} : std::vector<double>{-1.0, 0.0, 1.0});
  SlopePathOracleResult r;
  try {
    r = slope_path_oracle(f, x0, grid, alphabet, c.substeps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double h = grid.step();

  ScenarioOutput out;
  double floor = 0.0;
  bool pass = false;
  if (kind == FieldKind::kSign) {
    floor = h;  // exhaustive enumeration: the best chattering path reaches exactly h
    pass = r.min_max_residual >= floor;
  } else if (kind == FieldKind::kFixedSign) {
    pass = r.min_max_residual == 0.0;
  } else {
    const bool in_k = interval_membership(*f.cantor_set(), x0);
    out.report["x0_in_K"] = in_k;
    pass = in_k ? r.min_max_residual > 0.0 : r.min_max_residual == 0.0;
  }
  out.report["parameters"] = {{"field", io::to_json(spec)},
                              {"x0", x0},
                              {"T", grid.horizon()},
                              {"N", grid.steps()},
                              {"h", h},
                              {"alphabet", alphabet}};
  out.report["value"] = r.min_max_residual;
  out.report["value_over_h"] = r.min_max_residual / h;
  out.report["floor"] = floor;
  out.report["argmin_path"] = r.argmin_path;
  out.report["paths_searched"] = r.paths_searched;
  out.pass = pass;
  out.files.emplace_back("path.csv", path_csv(f, x0, grid, r.argmin_path));
  return out;
}

ScenarioOutput dead_curve(const ScenarioConfig& c) {
  const FieldSpec spec = c.field.value_or(default_spec(FieldKind::kSign));
  if (spec.kind != FieldKind::kSign && spec.kind != FieldKind::kFixedSign) {
    throw ConfigError("dead_curve requires the sign or fixed_sign field");
  }
  const BoundedField f = build_field(spec);
  const TimeGrid grid = build_grid(c, 1.0, 100);
  const double x0 = c.x0.value_or(0.5);
  if (!(x0 > 0.0)) throw ConfigError("dead_curve needs x0 > 0");
  const DeadCurveReport r = dead_curve_demo(f, x0, grid);
  const double h = grid.step();
  const bool sign = spec.kind == FieldKind::kSign;

  Checks checks;
  checks.add("pre_hit_integral", r.pre_hit_residual <= 1e-12, {{"value", r.pre_hit_residual}});
  if (!r.hit) {
    checks.add("no_hit_residual", r.rest_residual <= 1e-12, {{"value", r.rest_residual}});
  } else if (sign) {
    checks.add("continuation_floor", r.continuation_floor >= h,
               {{"value", r.continuation_floor}, {"limit", h}});
  } else {
    checks.add("rest_at_zero", r.rest_residual <= 1e-12, {{"value", r.rest_residual}});
  }

  ScenarioOutput out;
  out.report["parameters"] = {{"field", io::to_json(spec)},
                              {"x0", x0},
                              {"T", grid.horizon()},
                              {"N", grid.steps()},
                              {"h", h}};
  out.report["hit"] = r.hit;
  out.report["hit_index"] = r.hit_index;
  out.report["hit_time"] = r.hit_time;
  out.report["pre_hit_residual"] = r.pre_hit_residual;
  out.report["stop_at_zero_residual"] = r.rest_residual;
  out.report["continuation_steps"] = r.continuation_steps;
  out.report["value"] = r.continuation_floor;
  out.report["floor"] = sign && r.hit ? h : 0.0;
  out.report["checks"] = checks.list();
  out.pass = checks.all();

  std::vector<double> slopes(grid.steps());
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    slopes[i] = (std::max(x0 - grid.time(i + 1), 0.0) - std::max(x0 - grid.time(i), 0.0)) / h;
  }
  out.files.emplace_back("path.csv", path_csv(f, x0, grid, slopes));
  return out;
}

ScenarioOutput stationary(const ScenarioConfig& c) {
  const TimeGrid grid = build_grid(c, 0.5, 1000);
  const double tol = c.tol.value_or(0.01);
  const StationaryVariant variant =
      c.variant == "signed" ? StationaryVariant::kSigned : StationaryVariant::kAbsolute;
  StationaryScenario s;
  try {
    s = signed_stationary_scenario(c.radius, c.per_side, grid, tol, variant);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto battery = stationary_battery(c.radius, 1.0, grid.horizon());
  const bool expect_pass = variant == StationaryVariant::kSigned;

  ScenarioOutput out;
  out.report["parameters"] = {{"R", c.radius},
                              {"per_side", c.per_side},
                              {"variant", c.variant},
                              {"T", grid.horizon()},
                              {"N", grid.steps()},
                              {"h", grid.step()},
                              {"spacing", s.spacing}};
  out.report["value"] = s.report.max_residual;
  out.report["floor"] = expect_pass ? 0.0 : tol;
  out.report["expected"] = expect_pass ? "weak solution" : "not a weak solution";
  out.report["verification"] = io::to_json(s.report, battery);
  out.pass = s.report.pass == expect_pass;
  out.files.emplace_back("residual.csv", residual_csv(grid, s.report.residual_by_time));
  return out;
}

ScenarioOutput counterexample(const ScenarioConfig& c) {
  if (c.name == "sign_oracle") return oracle_scenario(c, FieldKind::kSign);
  if (c.name == "fixed_sign_oracle") return oracle_scenario(c, FieldKind::kFixedSign);
  if (c.name == "fat_cantor_oracle") return oracle_scenario(c, FieldKind::kFatCantor);
  if (c.name == "dead_curve") return dead_curve(c);
  return stationary(c);
}

// ------------------------------------------------------------------ density

ScenarioOutput density(const ScenarioConfig& c) {
  const BoundedField f = build_field(c.field.value_or(default_spec(FieldKind::kSmooth1d)));
  const FieldKind kind = f.kind();
  if (kind != FieldKind::kConstant && kind != FieldKind::kSmooth1d &&
      kind != FieldKind::kClampedRotation) {
    throw ConfigError("density requires the constant, smooth_1d or clamped_rotation field");
  }
  const TimeGrid grid = build_grid(c, 1.0, 2000);
  const std::size_t d = f.dimension();
  const bool rotation = kind == FieldKind::kClampedRotation;
  const double a = rotation ? 0.5 * f.spec().radius : 1.0;
  const double norm = d == 1 ? 15.0 / (16.0 * a) : (d == 2 ? 3.0 / (std::numbers::pi * a * a) : 0.0);
  if (norm == 0.0) throw ConfigError("density supports d = 1 or d = 2");
  const DensityFn u0 = [a, norm](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s /= a * a;
    return s < 1.0 ? norm * (1.0 - s) * (1.0 - s) : 0.0;
  };

  const std::size_t n = c.measure.count.value_or(d == 1 ? 10000 : 100);
  std::vector<double> points;
  std::vector<double> weights;
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= n;
  const double cell = 2.0 * a / static_cast<double>(n);
  const double volume = std::pow(cell, static_cast<double>(d));
  std::vector<double> x(d);
  for (std::size_t j = 0; j < total; ++j) {
    std::size_t rest = j;
    for (std::size_t k = d; k-- > 0;) {
      x[k] = -a + (static_cast<double>(rest % n) + 0.5) * cell;
      rest /= n;
    }
    points.insert(points.end(), x.begin(), x.end());
    weights.push_back(u0(x) * volume);
  }
  const ParticleMeasure mu(d, std::move(points), std::move(weights));
  const ParticleMeasure end = forward_solution(f, mu, grid).slice(grid.steps());

  std::vector<double> lo, hi;
  if (c.cell_lower) {
    lo = *c.cell_lower;
    hi = *c.cell_upper;
  } else {
    const double reach = rotation ? 0.7 * f.spec().radius : a + f.bound() * grid.horizon();
    lo = fill(d, -reach);
    hi = fill(d, reach);
  }
  if (lo.size() != d) throw ConfigError("cell box dimension does not match the field");
  const CellGrid cells(lo, hi, std::vector<std::size_t>(d, c.cells.value_or(100)));
  const auto masses = bin_masses(end, cells);
  double cell_volume = 1.0;
  for (double w : cells.widths()) cell_volume *= w;

  std::ostringstream csv;
  for (std::size_t k = 0; k < d; ++k) csv << 'x' << k << ',';
  csv << "histogram,classical\n";
  double l1 = 0.0;
  for (std::size_t k = 0; k < cells.cell_count(); ++k) {
    const auto center = cells.center(k);
    const double classical = classical_density(f, u0, grid, center, 1e-4).density;
    const double hist = masses[k] / cell_volume;
    l1 += std::abs(masses[k] - classical * cell_volume);
    for (double v : center) csv << num(v) << ',';
    csv << num(hist) << ',' << num(classical) << '\n';
  }
  const double tol = c.tol.value_or(0.05);

  Checks checks;
  checks.add("l1_discrepancy", l1 <= tol, {{"value", l1}, {"limit", tol}});
  ScenarioOutput out;
  out.report["field"] = field_summary(f);
  out.report["grid"] = {{"T", grid.horizon()}, {"N", grid.steps()}, {"h", grid.step()}};
  out.report["particles"] = mu.size();
  out.report["cells"] = {{"lower", lo}, {"upper", hi}, {"count", cells.cell_count()}};
  out.report["l1_discrepancy"] = l1;
  out.report["checks"] = checks.list();
  out.pass = checks.all();
  out.files.emplace_back("density.csv", csv.str());
  return out;
}

// ------------------------------------------------------------------ gallery

ScenarioOutput gallery(const ScenarioConfig& c) {
  std::mt19937_64 rng(c.seed);
  const double horizon = c.horizon.value_or(1.0);
  std::vector<FieldSpec> specs;
  if (c.field) {
    specs.push_back(*c.field);
  } else {
    for (FieldKind kind : gallery_kinds()) specs.push_back(default_spec(kind));
  }
  Checks checks;
  Json fields = Json::array();
  std::ostringstream csv;
  csv << "id,dimension,bound,max_sampled_norm\n";
  for (const FieldSpec& spec : specs) {
    const BoundedField f = build_field(spec);
    const bool cantor = f.kind() == FieldKind::kFatCantor;
    std::uniform_real_distribution<double> t(0.0, horizon);
    std::uniform_real_distribution<double> u(cantor ? -0.5 : -3.0, cantor ? 1.5 : 3.0);
    std::vector<double> x(f.dimension());
    std::vector<double> v(f.dimension());
    double worst = 0.0;
    for (std::size_t k = 0; k < c.samples; ++k) {
      const double tk = t(rng);
      for (double& xi : x) xi = u(rng);
      f.evaluate(tk, x, v);
      worst = std::max(worst, euclidean_norm(v));
    }
    Json entry = field_summary(f);
    entry["max_sampled_norm"] = worst;
    if (cantor) {
      entry["set_length"] = f.cantor_set()->length();
      entry["set_intervals"] = f.cantor_set()->size();
    }
    fields.push_back(entry);
    checks.add(std::string(f.id()) + "_bound", worst <= f.bound(),
               {{"value", worst}, {"limit", f.bound()}});
    csv << f.id() << ',' << f.dimension() << ',' << num(f.bound()) << ',' << num(worst) << '\n';
  }
  ScenarioOutput out;
  out.report["fields"] = fields;
  out.report["checks"] = checks.list();
  out.pass = checks.all();
  out.files.emplace_back("gallery.csv", csv.str());
  return out;
}

}  // namespace

ScenarioOutput execute(const ScenarioConfig& config) {
  validate(config);
  ScenarioOutput body;
  try {
    if (config.scenario == "transport") body = transport(config);
    else if (config.scenario == "superpose") body = superpose(config);
    else if (config.scenario == "counterexample") body = counterexample(config);
    else if (config.scenario == "density") body = density(config);
    else body = gallery(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    body = ScenarioOutput{};
    body.report["error"] = e.what();
    body.pass = false;
  }
  ScenarioOutput out;
  out.report["scenario"] = config.scenario == "counterexample" ? config.name : config.scenario;
  out.report["config"] = to_json(config);
  for (auto& [key, value] : body.report.items()) out.report[key] = value;
  out.report["pass"] = body.pass;
  out.pass = body.pass;
  out.files.emplace_back("report.json", io::dump(out.report));
  for (auto& file : body.files) out.files.push_back(std::move(file));
  return out;
}

int run(const ScenarioConfig& config, std::string* message) {
  ScenarioOutput out;
  try {
    out = execute(config);
  } catch (const ConfigError& e) {
    if (message) *message = e.what();
    return 2;
  }
  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  for (const auto& [name, contents] : out.files) io::write_text_file(dir / name, contents);
  if (message) {
    *message = out.report.contains("error") ? out.report["error"].get<std::string>()
                                            : (out.pass ? "all checks passed" : "checks failed");
  }
  return out.pass ? 0 : 1;
}

}  // namespace charflow::cli
