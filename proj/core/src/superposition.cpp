#include "charflow/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace charflow {

namespace {

// Split fractions this close to 0 or 1 are snapped, so displacements of
// exactly one cell width move mass wholesale.
constexpr double kSnap = 1e-9;

void require_nonnegative(const ParticleMeasure& mu) {
  if (!mu.nonnegative()) throw std::invalid_argument("nonnegative measure required");
}

}  // namespace

std::vector<double> discretize_measure(const ParticleMeasure& mu, const CellGrid& cells) {
  require_nonnegative(mu);
  return bin_masses(mu, cells);
}

std::size_t StepTransitions::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.size();
  return n;
}

TransportPlan build_transitions(const BoundedField& field, const ParticleMeasure& mu0,
                                const TimeGrid& grid, const CellGrid& cells) {
  require_nonnegative(mu0);
  const std::size_t d = cells.dimension();
  if (field.dimension() != d) {
    throw std::invalid_argument("build_transitions: field and cell grid dimensions differ");
  }
  const std::size_t ncells = cells.cell_count();
  const double h = grid.step();
  const auto widths = cells.widths();
  const auto per_axis = cells.cells_per_axis();

  TransportPlan plan;
  plan.transitions.cell_count = ncells;
  plan.transitions.steps.reserve(grid.steps());
  plan.slice_masses.reserve(grid.nodes());
  plan.slice_masses.push_back(discretize_measure(mu0, cells));

  std::vector<double> x(d), v(d), frac(d);
  std::vector<long long> base(d);
  std::vector<std::size_t> corner(d);
  for (std::size_t i = 0; i < grid.steps(); ++i) {
    const std::vector<double>& cur = plan.slice_masses.back();
    std::vector<double> next(ncells, 0.0);
    std::vector<Transition> edges;
    const double t = grid.time(i);
    for (std::size_t c = 0; c < ncells; ++c) {
      const double m = cur[c];
      if (!(m > 0.0)) continue;
      cells.center(c, x);
      field.evaluate(t, x, v);
      const auto multi = cells.unflatten(c);
      for (std::size_t a = 0; a < d; ++a) {
        // target position in cell-centre index units
        const double u = static_cast<double>(multi[a]) + h * v[a] / widths[a];
        double k0 = std::floor(u);
        double f = u - k0;
        if (f < kSnap) {
          f = 0.0;
        } else if (f > 1.0 - kSnap) {
          k0 += 1.0;
          f = 0.0;
        }
        base[a] = static_cast<long long>(k0);
        frac[a] = f;
      }
      const std::size_t first = edges.size();
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        double weight = 1.0;
        bool inside = true;
        for (std::size_t a = 0; a < d; ++a) {
          const bool up = (mask >> a) & 1U;
          weight *= up ? frac[a] : 1.0 - frac[a];
          const long long k = base[a] + (up ? 1 : 0);
          if (k < 0 || k >= static_cast<long long>(per_axis[a])) inside = false;
          corner[a] = inside ? static_cast<std::size_t>(k) : 0;
        }
        if (weight == 0.0) continue;
        if (!inside) {
          throw std::runtime_error("build_transitions: mass leaves the cell box at step " +
                                   std::to_string(i) + " from cell " + std::to_string(c) +
                                   "; inflate the box");
        }
        const std::size_t to = cells.flatten(corner);
        edges.push_back({c, to, m * weight});
        next[to] += m * weight;
      }
      std::sort(edges.begin() + static_cast<std::ptrdiff_t>(first), edges.end(),
                [](const Transition& a, const Transition& b) { return a.to < b.to; });
    }
    plan.transitions.steps.push_back(std::move(edges));
    plan.slice_masses.push_back(std::move(next));
  }
  return plan;
}

ContinuityCheck check_continuity(const StepTransitions& transitions,
                                 std::span<const double> initial) {
  const std::size_t n = transitions.cell_count;
  if (initial.size() != n) throw std::invalid_argument("check_continuity: cell count mismatch");
  ContinuityCheck worst;
  std::vector<double> incoming(initial.begin(), initial.end());
  for (std::size_t i = 0; i < transitions.steps.size(); ++i) {
    std::vector<double> outflow(n, 0.0);
    std::vector<double> inflow(n, 0.0);
    for (const Transition& e : transitions.steps[i]) {
      if (e.from >= n || e.to >= n || !(e.mass >= 0.0)) {
        throw std::invalid_argument("check_continuity: malformed transition at step " +
                                    std::to_string(i));
      }
      outflow[e.from] += e.mass;
      inflow[e.to] += e.mass;
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double gap = std::abs(outflow[c] - incoming[c]);
      if (gap > worst.max_violation) worst = {gap, i, c};
    }
    incoming.swap(inflow);
  }
  return worst;
}

PathDecomposition decompose_paths(const StepTransitions& input,
                                  std::span<const double> initial, const CellGrid& cells,
                                  const TimeGrid& grid) {
  StepTransitions transitions = input;
  for (auto& step : transitions.steps) {
    std::sort(step.begin(), step.end(), [](const Transition& a, const Transition& b) {
      return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
  }
  const std::size_t steps = grid.steps();
  if (transitions.steps.size() != steps || transitions.cell_count != cells.cell_count()) {
    throw std::invalid_argument("decompose_paths: transitions do not match the grids");
  }
  const double total = std::accumulate(initial.begin(), initial.end(), 0.0);
  const ContinuityCheck check = check_continuity(transitions, initial);
  if (check.max_violation > 1e-9 * std::max(total, 1e-300)) {
    throw std::invalid_argument("decompose_paths: discrete continuity violated at step " +
                                std::to_string(check.step) + ", cell " +
                                std::to_string(check.cell));
  }

  std::vector<std::vector<double>> remaining(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    for (const Transition& e : transitions.steps[i]) remaining[i].push_back(e.mass);
  }
  const double crumb = 1e-15 * total;

  auto edges_from = [&](std::size_t i, std::size_t cell) {
    const auto& es = transitions.steps[i];
    auto lo = std::lower_bound(es.begin(), es.end(), cell,
                               [](const Transition& e, std::size_t c) { return e.from < c; });
    auto hi = std::upper_bound(lo, es.end(), cell,
                               [](std::size_t c, const Transition& e) { return c < e.from; });
    return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(lo - es.begin()),
                                               static_cast<std::size_t>(hi - es.begin()));
  };

  PathDecomposition out{CurveMeasure(grid, cells.dimension()), {}, 0, transitions.edge_count(),
                        0.0};
  std::vector<Curve> curves;
  std::vector<double> weights;
  std::vector<std::size_t> chosen;  // edge index per step
  std::vector<std::size_t> path;
  const auto& step0 = transitions.steps.front();

  while (true) {
    // Source: largest remaining step-0 outflow, lowest cell index on ties.
    std::size_t source = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < step0.size();) {
      const std::size_t cell = step0[k].from;
      double sum = 0.0;
      for (; k < step0.size() && step0[k].from == cell; ++k) sum += remaining[0][k];
      if (sum > best) {
        best = sum;
        source = cell;
      }
    }
    if (!(best > 0.0)) break;

    ++out.rounds;
    chosen.clear();
    path.assign(1, source);
    std::size_t cell = source;
    for (std::size_t i = 0; i < steps; ++i) {
      const auto [lo, hi] = edges_from(i, cell);
      std::size_t pick = hi;
      double heaviest = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        if (remaining[i][k] > heaviest) {
          heaviest = remaining[i][k];
          pick = k;
        }
      }
      if (pick == hi) break;  // dead end left by rounding crumbs
      chosen.push_back(pick);
      cell = transitions.steps[i][pick].to;
      path.push_back(cell);
    }

    double weight = remaining[0][chosen[0]];
    std::size_t bottleneck = 0;
    for (std::size_t i = 1; i < chosen.size(); ++i) {
      if (remaining[i][chosen[i]] < weight) {
        weight = remaining[i][chosen[i]];
        bottleneck = i;
      }
    }
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      double& r = remaining[i][chosen[i]];
      r = (i == bottleneck || r - weight <= crumb) ? 0.0 : r - weight;
    }
    if (chosen.size() < steps) continue;

    std::vector<double> samples;
    samples.reserve(grid.nodes() * cells.dimension());
    for (std::size_t c : path) {
      const auto center = cells.center(c);
      samples.insert(samples.end(), center.begin(), center.end());
    }
    curves.emplace_back(grid, cells.dimension(), std::move(samples));
    weights.push_back(weight);
    out.cell_paths.push_back(path);
  }

  for (const auto& step : remaining) {
    out.residual_mass = std::max(out.residual_mass, std::accumulate(step.begin(), step.end(), 0.0));
  }
  out.eta = CurveMeasure(grid, cells.dimension(), std::move(curves), std::move(weights));
  return out;
}

PathDecomposition extract_eta(const BoundedField& field, const ParticleMeasure& mu0,
                              const TimeGrid& grid, const CellGrid& cells) {
  const TransportPlan plan = build_transitions(field, mu0, grid, cells);
  return decompose_paths(plan.transitions, plan.slice_masses.front(), cells, grid);
}

const Curve* FlowTable::find(std::size_t cell) const {
  auto it = std::lower_bound(cells.begin(), cells.end(), cell);
  if (it == cells.end() || *it != cell) return nullptr;
  return &curves[static_cast<std::size_t>(it - cells.begin())];
}

bool FlowTable::same_selection(const FlowTable& other) const {
  return cells == other.cells && curves == other.curves;
}

FlowTable select_flow(const CurveMeasure& eta, const CellGrid& cells) {
  if (eta.dimension() != cells.dimension()) {
    throw std::invalid_argument("select_flow: curve and cell dimensions differ");
  }
  const auto weights = eta.weights();
  const auto curves = eta.curves();
  std::vector<std::pair<std::size_t, std::size_t>> keyed;  // (cell, curve index)
  keyed.reserve(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    const auto cell = cells.locate(curves[k].sample(0));
    if (!cell) {
      throw std::out_of_range("select_flow: curve " + std::to_string(k) +
                              " starts outside the cell box");
    }
    keyed.emplace_back(*cell, k);
  }
  auto canonical = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    const double wa = weights[a.second];
    const double wb = weights[b.second];
    if (wa != wb) return wa > wb;
    const auto sa = curves[a.second].samples();
    const auto sb = curves[b.second].samples();
    return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
  };
  std::stable_sort(keyed.begin(), keyed.end(), canonical);

  FlowTable table;
  for (std::size_t k = 0; k < keyed.size();) {
    const std::size_t cell = keyed[k].first;
    table.cells.push_back(cell);
    table.curves.push_back(curves[keyed[k].second]);
    double mass = 0.0;
    for (; k < keyed.size() && keyed[k].first == cell; ++k) mass += weights[keyed[k].second];
    table.masses.push_back(mass);
  }
  return table;
}

double max_marginal_error(const CurveMeasure& eta,
                          std::span<const std::vector<double>> slice_masses,
                          const CellGrid& cells) {
  if (slice_masses.size() != eta.grid().nodes()) {
    throw std::invalid_argument("max_marginal_error: one slice per node required");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < slice_masses.size(); ++i) {
    const auto binned = bin_masses(evaluate_curves(eta, i), cells);
    double tv = 0.0;
    for (std::size_t c = 0; c < binned.size(); ++c) tv += std::abs(binned[c] - slice_masses[i][c]);
    worst = std::max(worst, tv);
  }
  return worst;
}

}  // namespace charflow
