#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "charflow/cell_grid.hpp"
#include "charflow/continuity.hpp"
#include "charflow/curve.hpp"
#include "charflow/measure.hpp"
#include "support.hpp"

namespace charflow {
namespace {

TEST(ParticleMeasure, Validation) {
  EXPECT_THROW(ParticleMeasure(1, {0.0, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(ParticleMeasure(2, {0.0, 1.0, 2.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_TRUE(ParticleMeasure(1, {0.0}, {1.0}).nonnegative());
  EXPECT_FALSE(ParticleMeasure(1, {0.0, 1.0}, {1.0, -1.0}).nonnegative());
}

TEST(Pushforward, IdentityAndTranslation) {
  const ParticleMeasure mu(2, {0.0, 0.0, 1.0, 2.0}, {1.0, 0.5});
  const ParticleMeasure same = pushforward(mu, [](std::span<const double> x, std::span<double> y) {
    std::copy(x.begin(), x.end(), y.begin());
  });
  EXPECT_EQ(same, mu);
  const ParticleMeasure shifted = pushforward(
      ParticleMeasure(2, {0.0, 0.0}, {1.0}), [](std::span<const double> x, std::span<double> y) {
        y[0] = x[0] + 1.0;
        y[1] = x[1];
      });
  EXPECT_EQ(shifted, ParticleMeasure(2, {1.0, 0.0}, {1.0}));
}

TEST(Pushforward, MapFailureNamesTheParticle) {
  const ParticleMeasure mu(1, {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  try {
    pushforward(mu, [](std::span<const double> x, std::span<double> y) {
      if (x[0] == 2.0) throw std::domain_error("bad point");
      y[0] = x[0];
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("particle 2"), std::string::npos) << e.what();
  }
}

TEST(PushforwardProperty, WeightsAreUntouched) {
  std::mt19937_64 rng(17);
  const ParticleMeasure mu = test::random_measure(rng, 1, 1000, -1.0, 1.0);
  for (FieldKind kind : {FieldKind::kSmooth1d, FieldKind::kSign, FieldKind::kFixedSign,
                         FieldKind::kFatCantor}) {
    const BoundedField f = make_field(default_spec(kind));
    const TimeGrid grid(1.0, 40);
    const ParticleMeasure out = pushforward(mu, [&](std::span<const double> x, std::span<double> y) {
      const std::vector<double> end = euler_flow(f, x, grid);
      y[0] = end[0];
    });
    EXPECT_TRUE(std::equal(out.weights().begin(), out.weights().end(), mu.weights().begin()));
    EXPECT_EQ(out.total_mass(), mu.total_mass());
  }
}

TEST(EvaluateCurves, DiracAndTwoCurves) {
  const TimeGrid g(1.0, 2);
  const Curve a(g, 1, {0.0, 0.5, 1.0});
  const Curve b(g, 1, {2.0, 2.0, 2.0});
  const CurveMeasure single(g, 1, {a}, {1.0});
  EXPECT_EQ(evaluate_curves(single, 1), ParticleMeasure(1, {0.5}, {1.0}));
  const CurveMeasure pair(g, 1, {a, b}, {0.3, 0.7});
  const ParticleMeasure at2 = evaluate_curves(pair, 2);
  EXPECT_EQ(at2, ParticleMeasure(1, {1.0, 2.0}, {0.3, 0.7}));
  EXPECT_TRUE(at2.nonnegative());
  EXPECT_THROW(evaluate_curves(pair, 3), std::out_of_range);
}

TEST(CurveMeasure, Validation) {
  const TimeGrid g(1.0, 2);
  const Curve a(g, 1, {0.0, 0.5, 1.0});
  EXPECT_THROW(CurveMeasure(g, 1, {a}, {-1.0}), std::invalid_argument);
  EXPECT_THROW(CurveMeasure(g, 1, {a}, {1.0, 2.0}), std::invalid_argument);
  const Curve other(TimeGrid(2.0, 2), 1, {0.0, 0.5, 1.0});
  EXPECT_THROW(CurveMeasure(g, 1, {other}, {1.0}), std::invalid_argument);
}

TEST(EvaluateCurvesProperty, CommutesWithPointwiseMaps) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const BoundedField f = make_field(default_spec(FieldKind::kSmooth1d));
  const TimeGrid g(1.0, 16);
  std::vector<Curve> curves;
  std::vector<double> weights;
  for (int k = 0; k < 50; ++k) {
    curves.push_back(integrate_euler(f, std::vector<double>{u(rng)}, g));
    weights.push_back(0.5 + 0.5 * u(rng));
  }
  const CurveMeasure eta(g, 1, curves, weights);
  const PointMap step = [&](std::span<const double> x, std::span<double> y) {
    y[0] = x[0] + g.step() * std::cos(x[0]);
  };
  const CurveMeasure moved = map_curves(eta, step);
  for (std::size_t i = 0; i <= g.steps(); ++i) {
    EXPECT_EQ(evaluate_curves(moved, i), pushforward(evaluate_curves(eta, i), step));
  }
}

TEST(TotalVariation, Basics) {
  EXPECT_EQ(total_variation(ParticleMeasure(1, {0.0, 1.0}, {1.0, -1.0})), 2.0);
  EXPECT_EQ(total_variation(ParticleMeasure(1)), 0.0);
  const ParticleMeasure mu(1, {0.0, 1.0}, {0.25, 0.5});
  EXPECT_EQ(total_variation(mu), mu.total_mass());
}

TEST(CellTv, Basics) {
  const CellGrid cells(-1.0, 1.0, 4);
  const ParticleMeasure zero(1, {0.0}, {1.0});
  EXPECT_EQ(cell_tv_distance(zero, zero, cells), 0.0);
  EXPECT_EQ(cell_tv_distance(zero, ParticleMeasure(1, {0.75}, {1.0}), cells), 2.0);
  EXPECT_EQ(cell_tv_distance(ParticleMeasure(1, {0.1}, {1.0}), ParticleMeasure(1, {0.4}, {1.0}), cells),
            0.0);
  EXPECT_THROW(cell_tv_distance(zero, ParticleMeasure(1, {3.0}, {1.0}), cells), std::out_of_range);
}

TEST(CellTv, BoundaryGoesToLowerCell) {
  const CellGrid cells(0.0, 1.0, 4);
  EXPECT_EQ(cells.locate(std::vector<double>{0.25}), 0u);
  EXPECT_EQ(cells.locate(std::vector<double>{0.0}), 0u);
  EXPECT_EQ(cells.locate(std::vector<double>{1.0}), 3u);
  EXPECT_FALSE(cells.locate(std::vector<double>{1.0000001}).has_value());
}

TEST(CellTvProperty, BoundedBySumOfVariations) {
  std::mt19937_64 rng(29);
  const CellGrid cells(std::vector<double>{-1.0, -1.0}, std::vector<double>{1.0, 1.0},
                       std::vector<std::size_t>{7, 5});
  for (int k = 0; k < 100; ++k) {
    const ParticleMeasure mu = test::random_measure(rng, 2, 30, -1.0, 1.0, true);
    const ParticleMeasure nu = test::random_measure(rng, 2, 20, -1.0, 1.0, true);
    EXPECT_LE(cell_tv_distance(mu, nu, cells), total_variation(mu) + total_variation(nu) + 1e-12);
  }
}

TEST(W1, Examples) {
  EXPECT_EQ(w1_distance_1d(ParticleMeasure(1, {0.0}, {1.0}), ParticleMeasure(1, {1.0}, {1.0})), 1.0);
  const ParticleMeasure mu(1, {0.0, 1.0}, {0.5, 0.5});
  EXPECT_EQ(w1_distance_1d(mu, mu), 0.0);
  EXPECT_DOUBLE_EQ(w1_distance_1d(mu, ParticleMeasure(1, {0.5}, {1.0})), 0.5);
  EXPECT_THROW(w1_distance_1d(mu, ParticleMeasure(1, {0.5}, {2.0})), std::invalid_argument);
  EXPECT_THROW(w1_distance_1d(ParticleMeasure(1, {0.0, 1.0}, {1.5, -0.5}),
                              ParticleMeasure(1, {0.5}, {1.0})),
               std::invalid_argument);
}

// Equal-weight atoms: W1 is the best assignment, found by trying all of them.
double brute_force_w1(std::vector<double> x, const std::vector<double>& y) {
  std::sort(x.begin(), x.end());
  double best = INFINITY;
  do {
    double cost = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) cost += std::abs(x[k] - y[k]);
    best = std::min(best, cost / static_cast<double>(x.size()));
  } while (std::next_permutation(x.begin(), x.end()));
  return best;
}

TEST(W1Property, MatchesAssignmentOracleAndIsAMetric) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto draw = [&](std::size_t n) {
    std::vector<double> p(n);
    for (double& v : p) v = u(rng);
    return p;
  };
  auto atoms = [](const std::vector<double>& p) {
    return ParticleMeasure(1, p, std::vector<double>(p.size(), 1.0 / static_cast<double>(p.size())));
  };
  for (int trial = 0; trial < 60; ++trial) {
    const std::vector<double> a = draw(6);
    const std::vector<double> b = draw(6);
    const std::vector<double> c = draw(6);
    const double ab = w1_distance_1d(atoms(a), atoms(b));
    EXPECT_NEAR(ab, brute_force_w1(a, b), 1e-12);
    EXPECT_NEAR(ab, w1_distance_1d(atoms(b), atoms(a)), 1e-12);
    EXPECT_LE(ab, w1_distance_1d(atoms(a), atoms(c)) + w1_distance_1d(atoms(c), atoms(b)) + 1e-12);
  }
}

}  // namespace
}  // namespace charflow
