#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "charflow/curve.hpp"
#include "charflow/field.hpp"
#include "charflow/measure.hpp"

namespace charflow {

enum class TimeProfile {
  kConstant,  // psi(t) = 1
  kCosine,    // psi(t) = cos(pi t / T)
};

/// Space-time bump phi(t, x) = psi(t) (1 - |x - c|^2 / r^2)^2 on |x - c| < r,
/// zero elsewhere. C^1 with compact support and closed-form derivatives.
class TestFunction {
 public:
  TestFunction(std::vector<double> center, double radius, TimeProfile profile, double horizon);

  std::span<const double> center() const { return center_; }
  double radius() const { return radius_; }
  TimeProfile profile() const { return profile_; }
  double horizon() const { return horizon_; }

  double value(double t, std::span<const double> x) const;
  double time_derivative(double t, std::span<const double> x) const;
  void gradient(double t, std::span<const double> x, std::span<double> out) const;
  /// d_t phi + v . grad phi at (t, x).
  double transport_derivative(double t, std::span<const double> x,
                              std::span<const double> v) const;
  /// True iff x lies in the open support ball.
  bool supports(std::span<const double> x) const;

  friend bool operator==(const TestFunction&, const TestFunction&) = default;

 private:
  double psi(double t) const;
  double psi_prime(double t) const;
  // |x - c|^2 / r^2
  double scaled_distance(std::span<const double> x) const;

  std::vector<double> center_;
  double radius_;
  TimeProfile profile_;
  double horizon_;
};

/// Time-indexed family {mu_{t_i}} on a grid, plus the initial datum.
class MeasureFamily {
 public:
  /// Initial datum is slices[0]. Throws unless there are N + 1 slices of a
  /// common dimension.
  MeasureFamily(TimeGrid grid, std::vector<ParticleMeasure> slices);
  /// Throws unless slices[0] equals `initial` bitwise.
  MeasureFamily(TimeGrid grid, ParticleMeasure initial, std::vector<ParticleMeasure> slices);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dimension() const { return initial_.dimension(); }
  const ParticleMeasure& initial() const { return initial_; }
  const ParticleMeasure& slice(std::size_t i) const { return slices_.at(i); }
  std::span<const ParticleMeasure> slices() const { return slices_; }

  /// Copy with slice i replaced; slice 0 cannot be replaced.
  MeasureFamily with_slice(std::size_t i, ParticleMeasure slice) const;

 private:
  TimeGrid grid_;
  ParticleMeasure initial_;
  std::vector<ParticleMeasure> slices_;
};

/// mu_{t_i} = (Phi_{t_i})_# mu0 with Phi the per-particle Euler flow. Every
/// slice shares mu0's weight buffer, so per-slice mass is bitwise constant.
MeasureFamily forward_solution(const BoundedField& field, const ParticleMeasure& mu0,
                               const TimeGrid& grid);

/// mu_{t_i} = delta_{gamma(t_i)} with unit weight.
MeasureFamily dirac_family(const Curve& curve);

/// Weak-formulation defect at node i:
///   R = <mu_i, phi(t_i)> - <mu0, phi(0)> - sum_{j<i} h <mu_j, d_t phi + b . grad phi>(t_j)
/// Left-endpoint time quadrature, matching the Euler update. Throws
/// std::out_of_range for i > N.
double weak_residual(const MeasureFamily& family, const BoundedField& field,
                     const TestFunction& phi, std::size_t i);

/// R(phi_k, t_i) for every k and i, indexed [k][i].
std::vector<std::vector<double>> residual_table(const MeasureFamily& family,
                                                const BoundedField& field,
                                                std::span<const TestFunction> battery);

struct VerificationReport {
  double max_residual = 0.0;
  std::size_t worst_phi = 0;
  std::size_t worst_time_index = 0;
  double tol = 0.0;
  bool pass = true;
  /// max_k |R(phi_k, t_i)| per node, for residual-vs-time plots.
  std::vector<double> residual_by_time;
};

/// pass iff max |R| over battery x nodes <= tol. Throws std::invalid_argument
/// on an empty battery.
VerificationReport verify_weak_solution(const MeasureFamily& family, const BoundedField& field,
                                        std::span<const TestFunction> battery, double tol);

/// Bumps centred on a regular lattice (`count_per_axis` points per axis,
/// endpoints included) over the box [lower, upper] inflated by bound * horizon,
/// radius twice the lattice spacing, each centre with both time profiles.
/// Every bump vanishes outside the box inflated by bound * horizon + radius.
std::vector<TestFunction> default_battery(std::span<const double> lower,
                                          std::span<const double> upper,
                                          std::size_t count_per_axis, double bound,
                                          double horizon);

struct ClassicalDensity {
  double density = 0.0;
  std::vector<double> preimage;  // y = Phi_T^{-1}(x)
  double jacobian = 1.0;         // det grad Phi_T(y)
};

using DensityFn = std::function<double(std::span<const double>)>;

/// u(T, x) = u0(y) / det grad Phi_T(y) at y = Phi_T^{-1}(x), with y obtained
/// by Euler on the time-reversed field over `grid` and the Jacobian by central
/// differences (step `probe`) of the forward Euler flow.
///
/// Only smooth gallery fields are accepted (constant, smooth_1d, and
/// clamped_rotation with |x| below the clamp radius); throws
/// std::invalid_argument otherwise and std::runtime_error when |det| < 1e-8.
ClassicalDensity classical_density(const BoundedField& field, const DensityFn& u0,
                                   const TimeGrid& grid, std::span<const double> x,
                                   double probe);

/// Euler flow map Phi_T applied to one point.
std::vector<double> euler_flow(const BoundedField& field, std::span<const double> x0,
                               const TimeGrid& grid);

}  // namespace charflow
