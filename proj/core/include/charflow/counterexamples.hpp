#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "charflow/continuity.hpp"
#include "charflow/curve.hpp"
#include "charflow/field.hpp"

namespace charflow {

/// int_{t0}^{t0+h} b(s, gamma(s)) ds along the linear segment gamma from a to b
/// (1D fields only).
///
/// sign, fixed_sign and fat_cantor are integrated exactly from the measure of
/// the segment's preimage of {x > 0}, {x < 0} or K; other fields use
/// `substeps`-point midpoint sampling.
double segment_integral(const BoundedField& field, double t0, double h, double a, double b,
                        std::size_t substeps);

/// max_i |G(gamma)(t_i)| for a 1D piecewise-linear curve, using
/// segment_integral on every grid segment.
double exact_max_residual(const BoundedField& field, const Curve& curve, std::size_t substeps);

/// Same objective for the path x0 + h * (s_0 + ... + s_{i-1}).
double path_max_residual(const BoundedField& field, double x0, const TimeGrid& grid,
                         std::span<const double> slopes, std::size_t substeps);

struct SlopePathOracleResult {
  double min_max_residual = 0.0;
  std::vector<double> argmin_path;  // slope per step
  std::uint64_t paths_searched = 0;
};

/// Exhaustive minimum of path_max_residual over all slope sequences in
/// alphabet^N. The alphabet is sorted and deduplicated; the returned
/// minimizer is the lexicographically smallest one. Work is split over the
/// first-step branch.
///
/// Throws std::invalid_argument for d != 1 or slopes outside [-M, M], and
/// std::length_error when alphabet^N exceeds `budget`.
SlopePathOracleResult slope_path_oracle(const BoundedField& field, double x0,
                                        const TimeGrid& grid, std::vector<double> alphabet,
                                        std::size_t substeps = 16,
                                        std::uint64_t budget = 10'000'000);

enum class StationaryVariant {
  kSigned,    // +1 on (0, R], -1 on [-R, 0)
  kAbsolute,  // |mu0|: +1 on [-R, R]
};

struct StationaryScenario {
  VerificationReport report;
  double step = 0.0;      // h
  double spacing = 0.0;   // R / n
  std::size_t particles = 0;
  StationaryVariant variant = StationaryVariant::kSigned;
};

/// Bumps for the stationary scenario: `centers` centres evenly on
/// [-a/2, a/2] with radius 0.45 a, a = R - M T, both time profiles.
std::vector<TestFunction> stationary_battery(double radius, double bound, double horizon,
                                             std::size_t centers = 9);

/// Sign field with the time-constant family mu_t = mu0, mu0 the midpoint
/// particle approximation of 1_{(0,R)} L^1 - 1_{(-R,0)} L^1 (or of its
/// absolute value) with `per_side` particles of weight R / per_side on each
/// side. The signed family satisfies the weak identity up to O(h + R/n); the
/// absolute variant does not.
///
/// Throws std::invalid_argument when a bump reaches beyond R - M T.
StationaryScenario signed_stationary_scenario(double radius, std::size_t per_side,
                                              const TimeGrid& grid, double tol,
                                              StationaryVariant variant = StationaryVariant::kSigned,
                                              std::span<const TestFunction> battery = {});

struct DeadCurveReport {
  bool hit = false;
  std::size_t hit_index = 0;        // first node with x0 - t_i <= 0
  double hit_time = 0.0;
  double pre_hit_residual = 0.0;    // gamma(t) = x0 - t up to the hit
  double rest_residual = 0.0;       // stop-at-zero curve over the full horizon
  double continuation_floor = 0.0;  // oracle minimum restarted at 0
  std::size_t continuation_steps = 0;
};

/// gamma(t) = x0 - t under the sign (or fixed_sign) field: integral curve up to
/// t = x0; afterwards the best {-1, 0, +1} continuation from 0 is searched
/// exhaustively over min(N - hit, 10) steps. Since the objective is a max over
/// nodes, the floor over that prefix bounds every longer continuation from
/// below.
DeadCurveReport dead_curve_demo(const BoundedField& field, double x0, const TimeGrid& grid);

}  // namespace charflow
