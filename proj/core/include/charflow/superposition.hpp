#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "charflow/cell_grid.hpp"
#include "charflow/curve.hpp"
#include "charflow/field.hpp"
#include "charflow/measure.hpp"

namespace charflow {

/// Mass per cell. Weights are routed whole to their bins. Throws
/// std::invalid_argument ("nonnegative measure required") for signed input and
/// std::out_of_range for a particle outside the box.
std::vector<double> discretize_measure(const ParticleMeasure& mu, const CellGrid& cells);

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  double mass = 0.0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Per-step mass moves between cells; steps[i] is sorted by (from, to) and
/// holds no duplicate pair.
struct StepTransitions {
  std::size_t cell_count = 0;
  std::vector<std::vector<Transition>> steps;

  std::size_t edge_count() const;
};

struct TransportPlan {
  StepTransitions transitions;
  /// slice_masses[i][cell], i = 0..N.
  std::vector<std::vector<double>> slice_masses;
};

/// Cell-level transport along characteristics: at step i every occupied
/// cell's mass is displaced by h b(t_i, centre) and split over the <= 2^d
/// surrounding cells with multilinear weights. Slice i+1 is the inflow of
/// step i, so discrete continuity holds by construction.
///
/// Throws std::runtime_error if mass would leave the cell box (inflate it).
TransportPlan build_transitions(const BoundedField& field, const ParticleMeasure& mu0,
                                const TimeGrid& grid, const CellGrid& cells);

struct ContinuityCheck {
  double max_violation = 0.0;  // absolute
  std::size_t step = 0;
  std::size_t cell = 0;
};

/// Largest mismatch between outflow at step i and the cell's mass entering
/// step i (initial masses for i = 0, inflow of step i - 1 afterwards).
ContinuityCheck check_continuity(const StepTransitions& transitions,
                                 std::span<const double> initial);

struct PathDecomposition {
  CurveMeasure eta;
  /// Cell sequence of each path (N + 1 cells), aligned with eta's curves.
  std::vector<std::vector<std::size_t>> cell_paths;
  std::size_t rounds = 0;
  std::size_t edge_count = 0;
  /// Mass left in transitions after stripping (rounding crumbs).
  double residual_mass = 0.0;
};

/// Greedy path stripping on the time-expanded cell graph. Each round starts
/// at the step-0 source cell with the largest remaining outflow, follows the
/// heaviest remaining edge at every step (ties to the lower cell index) up to
/// t_N, and strips the path's bottleneck mass; every round zeroes at least one
/// edge, so rounds <= edge count. Paths run through cell centres.
///
/// Throws std::invalid_argument naming the step and cell when the input
/// violates discrete continuity by more than 1e-9 of the total mass.
PathDecomposition decompose_paths(const StepTransitions& transitions,
                                  std::span<const double> initial, const CellGrid& cells,
                                  const TimeGrid& grid);

/// build_transitions followed by decompose_paths.
PathDecomposition extract_eta(const BoundedField& field, const ParticleMeasure& mu0,
                              const TimeGrid& grid, const CellGrid& cells);

/// One representative curve per occupied initial cell.
struct FlowTable {
  std::vector<std::size_t> cells;
  std::vector<Curve> curves;
  /// mu0 mass of each cell (sum of the weights of eta's curves starting there).
  std::vector<double> masses;

  /// Selected curve for a cell, if any.
  const Curve* find(std::size_t cell) const;
  /// Bitwise equality of cells and curves only.
  bool same_selection(const FlowTable& other) const;

  friend bool operator==(const FlowTable&, const FlowTable&) = default;
};

/// Groups eta's curves by the cell of their starting point and keeps the one
/// of largest weight, ties broken by lexicographically smallest sample
/// sequence. Masses are summed in that canonical order, so the table does not
/// depend on the order of eta's curves.
FlowTable select_flow(const CurveMeasure& eta, const CellGrid& cells);

/// Largest |(e_{t_i})_# eta - slice_i| cell TV over all nodes.
double max_marginal_error(const CurveMeasure& eta,
                          std::span<const std::vector<double>> slice_masses,
                          const CellGrid& cells);

}  // namespace charflow
