#include "charflow/cell_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace charflow {

CellGrid::CellGrid(std::vector<double> lower, std::vector<double> upper,
                   std::vector<std::size_t> cells_per_axis)
    : lower_(std::move(lower)), upper_(std::move(upper)), cells_(std::move(cells_per_axis)) {
  const std::size_t d = lower_.size();
  if (d == 0 || upper_.size() != d || cells_.size() != d) {
    throw std::invalid_argument("CellGrid: box bounds and cell counts must share a dimension");
  }
  count_ = 1;
  widths_.resize(d);
  for (std::size_t a = 0; a < d; ++a) {
    if (!std::isfinite(lower_[a]) || !std::isfinite(upper_[a]) || !(lower_[a] < upper_[a])) {
      throw std::invalid_argument("CellGrid: empty or non-finite box along axis " +
                                  std::to_string(a));
    }
    if (cells_[a] == 0) throw std::invalid_argument("CellGrid: zero cells along an axis");
    widths_[a] = (upper_[a] - lower_[a]) / static_cast<double>(cells_[a]);
    count_ *= cells_[a];
  }
}

CellGrid::CellGrid(double lower, double upper, std::size_t cells)
    : CellGrid(std::vector<double>{lower}, std::vector<double>{upper},
               std::vector<std::size_t>{cells}) {}

double CellGrid::diagonal() const {
  double sum = 0.0;
  for (double w : widths_) sum += w * w;
  return std::sqrt(sum);
}

std::optional<std::size_t> CellGrid::locate(std::span<const double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("CellGrid::locate: dimension");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dimension(); ++a) {
    if (!(x[a] >= lower_[a] && x[a] <= upper_[a])) return std::nullopt;
    // ceil(u) - 1 sends a point on a face to the lower cell
    const double u = (x[a] - lower_[a]) / widths_[a];
    double k = std::ceil(u) - 1.0;
    if (k < 0.0) k = 0.0;
    const double last = static_cast<double>(cells_[a] - 1);
    if (k > last) k = last;
    flat = flat * cells_[a] + static_cast<std::size_t>(k);
  }
  return flat;
}

std::vector<std::size_t> CellGrid::unflatten(std::size_t flat) const {
  std::vector<std::size_t> multi(dimension());
  for (std::size_t a = dimension(); a-- > 0;) {
    multi[a] = flat % cells_[a];
    flat /= cells_[a];
  }
  return multi;
}

std::size_t CellGrid::flatten(std::span<const std::size_t> multi) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dimension(); ++a) flat = flat * cells_[a] + multi[a];
  return flat;
}

void CellGrid::center(std::size_t flat, std::span<double> out) const {
  for (std::size_t a = dimension(); a-- > 0;) {
    const std::size_t k = flat % cells_[a];
    flat /= cells_[a];
    out[a] = lower_[a] + (static_cast<double>(k) + 0.5) * widths_[a];
  }
}

std::vector<double> CellGrid::center(std::size_t flat) const {
  std::vector<double> out(dimension());
  center(flat, out);
  return out;
}

std::vector<double> bin_masses(const ParticleMeasure& mu, const CellGrid& cells) {
  if (mu.dimension() != cells.dimension()) {
    throw std::invalid_argument("bin_masses: measure and cell grid dimensions differ");
  }
  std::vector<double> masses(cells.cell_count(), 0.0);
  for (std::size_t j = 0; j < mu.size(); ++j) {
    const auto cell = cells.locate(mu.point(j));
    if (!cell) {
      throw std::out_of_range("particle " + std::to_string(j) + " lies outside the cell box");
    }
    masses[*cell] += mu.weights()[j];
  }
  return masses;
}

double cell_tv_distance(const ParticleMeasure& mu, const ParticleMeasure& nu,
                        const CellGrid& cells) {
  const auto a = bin_masses(mu, cells);
  const auto b = bin_masses(nu, cells);
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(a[k] - b[k]);
  return sum;
}

}  // namespace charflow
