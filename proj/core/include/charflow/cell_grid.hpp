#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "charflow/measure.hpp"

namespace charflow {

/// Regular box partition of R^d into cells, flattened row-major (last axis
/// fastest). A point on a shared cell face belongs to the lower-indexed cell.
class CellGrid {
 public:
  CellGrid(std::vector<double> lower, std::vector<double> upper,
           std::vector<std::size_t> cells_per_axis);
  /// One-dimensional convenience constructor.
  CellGrid(double lower, double upper, std::size_t cells);

  std::size_t dimension() const { return lower_.size(); }
  std::size_t cell_count() const { return count_; }
  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  std::span<const std::size_t> cells_per_axis() const { return cells_; }
  std::span<const double> widths() const { return widths_; }
  /// Euclidean length of the cell diagonal.
  double diagonal() const;

  /// Flat index of the cell containing x, or nullopt outside the closed box.
  std::optional<std::size_t> locate(std::span<const double> x) const;
  void center(std::size_t flat, std::span<double> out) const;
  std::vector<double> center(std::size_t flat) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const std::size_t> multi) const;

  friend bool operator==(const CellGrid&, const CellGrid&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::size_t> cells_;
  std::vector<double> widths_;
  std::size_t count_ = 0;
};

/// Sum of particle weights per cell (signed weights allowed). Throws
/// std::out_of_range naming the first particle outside the box.
std::vector<double> bin_masses(const ParticleMeasure& mu, const CellGrid& cells);

/// sum over cells of |mu(cell) - nu(cell)|.
double cell_tv_distance(const ParticleMeasure& mu, const ParticleMeasure& nu,
                        const CellGrid& cells);

}  // namespace charflow
