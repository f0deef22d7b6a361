#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "charflow/cell_grid.hpp"
#include "charflow/continuity.hpp"
#include "support.hpp"

namespace charflow {
namespace {

BoundedField field(FieldKind kind) { return make_field(default_spec(kind)); }

TEST(TestFunction, ValueAndSupport) {
  const TestFunction phi({0.0, 0.0}, 2.0, TimeProfile::kCosine, 1.0);
  EXPECT_EQ(phi.value(0.0, std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_NEAR(phi.value(0.5, std::vector<double>{0.0, 0.0}), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(phi.value(0.0, std::vector<double>{1.0, 0.0}), 0.5625);
  EXPECT_EQ(phi.value(0.0, std::vector<double>{2.0, 0.0}), 0.0);
  EXPECT_EQ(phi.value(0.3, std::vector<double>{1.5, 1.5}), 0.0);
  EXPECT_FALSE(phi.supports(std::vector<double>{2.0, 0.0}));
  EXPECT_THROW(TestFunction({0.0}, 0.0, TimeProfile::kConstant, 1.0), std::invalid_argument);
}

TEST(TestFunctionProperty, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t d : {1u, 2u, 3u}) {
    std::vector<double> c(d);
    for (double& ci : c) ci = u(rng);
    const double r = 0.8;
    const TestFunction phi(c, r, TimeProfile::kCosine, 2.0);
    int checked = 0;
    while (checked < 100) {
      std::vector<double> x(d);
      for (std::size_t a = 0; a < d; ++a) x[a] = c[a] + r * u(rng);
      double s = 0.0;
      for (std::size_t a = 0; a < d; ++a) s += (x[a] - c[a]) * (x[a] - c[a]);
      if (std::sqrt(s) > 0.95 * r) continue;
      const double t = 0.5 + 0.5 * u(rng);
      std::vector<double> g(d);
      phi.gradient(t, x, g);
      const double step = 1e-5;
      for (std::size_t a = 0; a < d; ++a) {
        std::vector<double> xp = x, xm = x;
        xp[a] += step;
        xm[a] -= step;
        const double fd = (phi.value(t, xp) - phi.value(t, xm)) / (2.0 * step);
        EXPECT_NEAR(g[a], fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
      const double ft = (phi.value(t + step, x) - phi.value(t - step, x)) / (2.0 * step);
      EXPECT_NEAR(phi.time_derivative(t, x), ft, 1e-6);
      ++checked;
    }
  }
}

TEST(MeasureFamily, SliceZeroMustBeInitial) {
  const TimeGrid g(1.0, 1);
  const ParticleMeasure a(1, {0.0}, {1.0});
  const ParticleMeasure b(1, {0.5}, {1.0});
  EXPECT_THROW(MeasureFamily(g, a, {b, b}), std::invalid_argument);
  EXPECT_THROW(MeasureFamily(g, a, {a}), std::invalid_argument);
  EXPECT_NO_THROW(MeasureFamily(g, a, {a, b}));
}

TEST(ForwardSolution, ConstantFieldTranslates) {
  const BoundedField f = field(FieldKind::kConstant);
  const ParticleMeasure mu(2, {0.0, 0.0, 1.0, 1.0}, {0.5, 0.25});
  const TimeGrid g(1.0, 8);
  const MeasureFamily fam = forward_solution(f, mu, g);
  for (std::size_t i = 0; i <= 8; ++i) {
    const ParticleMeasure& s = fam.slice(i);
    EXPECT_EQ(s.point(0)[0], g.time(i));
    EXPECT_EQ(s.point(1)[0], 1.0 + g.time(i));
    EXPECT_EQ(s.point(1)[1], 1.0);
    EXPECT_TRUE(s.shares_weights_with(mu));
  }
}

TEST(ForwardSolution, FixedSignMovesParticlesDownUntilNearZero) {
  const BoundedField f = field(FieldKind::kFixedSign);
  const TimeGrid g(1.5, 150);
  const MeasureFamily fam = forward_solution(f, test::midpoint_measure(0.2, 1.0, 20), g);
  for (std::size_t j = 0; j < 20; ++j) {
    for (std::size_t i = 0; i < g.steps(); ++i) {
      const double x = fam.slice(i).point(j)[0];
      const double next = fam.slice(i + 1).point(j)[0];
      if (x > g.step()) {
        EXPECT_LT(next, x);
      } else {
        EXPECT_LE(std::abs(next), g.step() + 1e-12);
      }
    }
  }
}

TEST(ForwardSolution, MassIsBitwiseConstant) {
  std::mt19937_64 rng(43);
  for (FieldKind kind : gallery_kinds()) {
    const BoundedField f = field(kind);
    const ParticleMeasure mu = test::random_measure(rng, f.dimension(), 300, -1.0, 1.0);
    const MeasureFamily fam = forward_solution(f, mu, TimeGrid(1.0, 50));
    for (const ParticleMeasure& s : fam.slices()) EXPECT_EQ(s.total_mass(), mu.total_mass());
  }
}

TEST(WeakResidual, TrivialCases) {
  const BoundedField f = field(FieldKind::kSmooth1d);
  const MeasureFamily fam = forward_solution(f, test::midpoint_measure(0.0, 1.0, 10), TimeGrid(1.0, 20));
  const TestFunction near({0.5}, 0.4, TimeProfile::kCosine, 1.0);
  const TestFunction far({10.0}, 0.4, TimeProfile::kCosine, 1.0);
  EXPECT_EQ(weak_residual(fam, f, near, 0), 0.0);
  for (std::size_t i = 0; i <= 20; ++i) EXPECT_EQ(weak_residual(fam, f, far, i), 0.0);
  EXPECT_THROW(weak_residual(fam, f, near, 21), std::out_of_range);
  const std::vector<TestFunction> none{far};
  const VerificationReport r = verify_weak_solution(fam, f, none, 1e-12);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_residual, 0.0);
  EXPECT_THROW(verify_weak_solution(fam, f, std::vector<TestFunction>{}, 1.0), std::invalid_argument);
}

TEST(WeakResidual, ConstantFieldIsFirstOrder) {
  const BoundedField f = field(FieldKind::kConstant);
  const ParticleMeasure mu(2, {0.1, 0.0, -0.2, 0.1}, {0.5, 0.5});
  const TestFunction phi({0.5, 0.0}, 1.5, TimeProfile::kCosine, 1.0);
  double prev = 0.0;
  for (std::size_t n : {200u, 400u}) {
    const TimeGrid g(1.0, n);
    const MeasureFamily fam = forward_solution(f, mu, g);
    double worst = 0.0;
    for (std::size_t i = 0; i <= n; ++i) worst = std::max(worst, std::abs(weak_residual(fam, f, phi, i)));
    EXPECT_LE(worst, 2.0 * g.step());
    if (prev > 0.0) {
      EXPECT_GE(prev / worst, 1.6);
      EXPECT_LE(prev / worst, 2.4);
    }
    prev = worst;
  }
}

TEST(WeakResidual, DetectsShiftedSlice) {
  const BoundedField f = field(FieldKind::kSmooth1d);
  const TimeGrid g(1.0, 200);
  const ParticleMeasure mu = test::midpoint_measure(0.0, 1.0, 100);
  const MeasureFamily fam = forward_solution(f, mu, g);
  const std::vector<double> lo{0.0}, hi{1.0};
  const auto battery = default_battery(lo, hi, 5, f.bound(), 1.0);
  const double tol = 2.0 * g.step();
  EXPECT_TRUE(verify_weak_solution(fam, f, battery, tol).pass);

  const ParticleMeasure& s = fam.slice(100);
  std::vector<double> shifted(s.points().begin(), s.points().end());
  for (double& x : shifted) x += 10.0 * g.step() * f.bound();
  const MeasureFamily bad = fam.with_slice(100, s.with_points(shifted));
  const VerificationReport r = verify_weak_solution(bad, f, battery, tol);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.worst_time_index, 100u);
}

TEST(WeakResidual, DiracMatchesSingleParticleForwardSolution) {
  for (FieldKind kind : gallery_kinds()) {
    const BoundedField f = field(kind);
    const std::vector<double> x0 = f.dimension() == 2 ? std::vector<double>{0.3, -0.2}
                                                      : std::vector<double>{0.3};
    const TimeGrid g(1.0, 64);
    const MeasureFamily dirac = dirac_family(integrate_euler(f, x0, g));
    const MeasureFamily fwd = forward_solution(f, ParticleMeasure(f.dimension(), x0, {1.0}), g);
    const TestFunction phi(x0, 1.2, TimeProfile::kCosine, 1.0);
    for (std::size_t i = 0; i <= 64; ++i) {
      EXPECT_EQ(weak_residual(dirac, f, phi, i), weak_residual(fwd, f, phi, i)) << f.id();
    }
  }
}

TEST(WeakResidualProperty, LinearInWeights) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const BoundedField f = field(FieldKind::kSmooth1d);
  const TimeGrid g(1.0, 40);
  const TestFunction phi({0.2}, 1.0, TimeProfile::kCosine, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double x1 = u(rng), x2 = u(rng), w1 = u(rng), w2 = u(rng);
    const MeasureFamily both = forward_solution(f, ParticleMeasure(1, {x1, x2}, {w1, w2}), g);
    const MeasureFamily one = forward_solution(f, ParticleMeasure(1, {x1}, {1.0}), g);
    const MeasureFamily two = forward_solution(f, ParticleMeasure(1, {x2}, {1.0}), g);
    for (std::size_t i = 0; i <= 40; i += 8) {
      EXPECT_NEAR(weak_residual(both, f, phi, i),
                  w1 * weak_residual(one, f, phi, i) + w2 * weak_residual(two, f, phi, i), 1e-12);
    }
  }
}

TEST(DefaultBattery, CountAndSupport) {
  const std::vector<double> lo{0.0}, hi{1.0};
  const auto battery = default_battery(lo, hi, 3, 1.0, 0.5);
  ASSERT_EQ(battery.size(), 6u);
  EXPECT_EQ(battery[0].profile(), TimeProfile::kConstant);
  EXPECT_EQ(battery[1].profile(), TimeProfile::kCosine);
  EXPECT_EQ(battery[0].center()[0], -0.5);
  EXPECT_EQ(battery[4].center()[0], 1.5);
  const double radius = battery[0].radius();
  EXPECT_DOUBLE_EQ(radius, 2.0);
  for (const TestFunction& phi : battery) {
    for (double x : {-0.5 - radius, 1.5 + radius, -10.0, 10.0}) {
      EXPECT_EQ(phi.value(0.2, std::vector<double>{x}), 0.0);
    }
  }
  const std::vector<double> lo2{0.0, 0.0}, hi2{1.0, 2.0};
  EXPECT_EQ(default_battery(lo2, hi2, 4, 1.0, 1.0).size(), 32u);
}

double bump(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s < 1.0 ? (1.0 - s) * (1.0 - s) : 0.0;
}

TEST(ClassicalDensity, ConstantFieldTranslates) {
  const BoundedField f = field(FieldKind::kConstant);
  const TimeGrid g(0.5, 10);
  const std::vector<double> x{0.6, 0.1};
  const ClassicalDensity d = classical_density(f, bump, g, x, 1e-4);
  EXPECT_NEAR(d.jacobian, 1.0, 1e-9);
  EXPECT_NEAR(d.preimage[0], 0.1, 1e-14);
  EXPECT_NEAR(d.density, bump(std::vector<double>{0.1, 0.1}), 1e-9);
}

TEST(ClassicalDensity, RotationPreservesArea) {
  const BoundedField f = field(FieldKind::kClampedRotation);
  const TimeGrid g(1.0, 4096);
  for (const std::vector<double>& x : {std::vector<double>{0.3, 0.2}, std::vector<double>{-0.1, 0.5}}) {
    const ClassicalDensity d = classical_density(f, bump, g, x, 1e-4);
    EXPECT_NEAR(d.jacobian, 1.0, 5e-3);
    const double r0 = std::hypot(x[0], x[1]);
    const double r1 = std::hypot(d.preimage[0], d.preimage[1]);
    EXPECT_NEAR(r0, r1, 5e-3);
  }
}

TEST(ClassicalDensity, RejectsDiscontinuousFields) {
  const std::vector<double> x{0.2};
  for (FieldKind kind : {FieldKind::kSign, FieldKind::kFixedSign, FieldKind::kFatCantor}) {
    EXPECT_THROW(classical_density(field(kind), bump, TimeGrid(1.0, 4), x, 1e-4),
                 std::invalid_argument);
  }
  const std::vector<double> outside{2.0, 0.0};
  EXPECT_THROW(classical_density(field(FieldKind::kClampedRotation), bump, TimeGrid(1.0, 4), outside, 1e-4),
               std::invalid_argument);
}

TEST(ClassicalDensity, AgreesWithParticleHistogram) {
  const BoundedField f = field(FieldKind::kSmooth1d);
  const TimeGrid g(1.0, 500);
  auto u0 = [](std::span<const double> x) { return 15.0 / 16.0 * bump(x); };
  std::vector<double> points, weights;
  const std::size_t n = 4000;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = -1.0 + (static_cast<double>(k) + 0.5) * 2.0 / static_cast<double>(n);
    points.push_back(x);
    weights.push_back(u0(std::vector<double>{x}) * 2.0 / static_cast<double>(n));
  }
  const ParticleMeasure mu(1, points, weights);
  const ParticleMeasure end = forward_solution(f, mu, g).slice(g.steps());
  const CellGrid cells(-1.0, 2.2, 40);
  const std::vector<double> mass = bin_masses(end, cells);
  double l1 = 0.0;
  for (std::size_t k = 0; k < cells.cell_count(); ++k) {
    const double density = classical_density(f, u0, g, cells.center(k), 1e-4).density;
    l1 += std::abs(mass[k] - density * cells.widths()[0]);
  }
  EXPECT_LE(l1, 0.05);
}

}  // namespace
}  // namespace charflow
