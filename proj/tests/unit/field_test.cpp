#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "charflow/field.hpp"
#include "charflow/interval_set.hpp"

namespace charflow {
namespace {

std::vector<double> at(const BoundedField& f, double t, std::vector<double> x) {
  return f(t, x);
}

TEST(Field, ConstantReturnsItsVelocity) {
  const BoundedField f = make_field(default_spec(FieldKind::kConstant));
  EXPECT_EQ(f.dimension(), 2u);
  EXPECT_EQ(at(f, 0.3, {5.0, -7.0}), (std::vector<double>{1.0, 0.0}));
  FieldSpec spec = default_spec(FieldKind::kConstant);
  spec.velocity = {2.0, 0.0};
  EXPECT_EQ(make_field(spec).bound(), 2.0);
}

TEST(Field, SignValues) {
  const BoundedField f = make_field(default_spec(FieldKind::kSign));
  EXPECT_EQ(at(f, 0.0, {0.0})[0], -1.0);
  EXPECT_EQ(at(f, 0.0, {-0.5})[0], 1.0);
  EXPECT_EQ(at(f, 0.0, {0.25})[0], -1.0);
  EXPECT_EQ(f.bound(), 1.0);
}

TEST(Field, FixedSignVanishesAtOrigin) {
  const BoundedField f = make_field(default_spec(FieldKind::kFixedSign));
  EXPECT_EQ(at(f, 0.0, {0.0})[0], 0.0);
  EXPECT_EQ(at(f, 0.0, {-1e-300})[0], 1.0);
  EXPECT_EQ(at(f, 0.0, {1e-300})[0], -1.0);
}

TEST(Field, ClampedRotation) {
  const BoundedField f = make_field(default_spec(FieldKind::kClampedRotation));
  EXPECT_EQ(at(f, 0.0, {0.5, 0.25}), (std::vector<double>{-0.25, 0.5}));
  const std::vector<double> far = at(f, 0.0, {3.0, 4.0});
  EXPECT_LE(euclidean_norm(far), 1.0);
  EXPECT_NEAR(far[0], -0.8, 1e-15);
  EXPECT_NEAR(far[1], 0.6, 1e-15);
}

TEST(Field, SmoothIsCosine) {
  const BoundedField f = make_field(default_spec(FieldKind::kSmooth1d));
  EXPECT_EQ(at(f, 0.0, {0.7})[0], std::cos(0.7));
}

TEST(Field, FatCantorIndicator) {
  FieldSpec spec = default_spec(FieldKind::kFatCantor);
  spec.level = 1;
  const BoundedField f = make_field(spec);
  EXPECT_EQ(at(f, 0.0, {0.0})[0], 1.0);
  EXPECT_EQ(at(f, 0.0, {0.375})[0], 1.0);
  EXPECT_EQ(at(f, 0.0, {0.5})[0], 0.0);
  EXPECT_EQ(at(f, 0.0, {-0.1})[0], 0.0);
  EXPECT_EQ(f.bound(), 1.0);
}

TEST(Field, RejectsBadSpecs) {
  EXPECT_THROW(field_kind_from_id("vortex"), std::invalid_argument);
  FieldSpec rot = default_spec(FieldKind::kClampedRotation);
  rot.radius = 0.0;
  EXPECT_THROW(make_field(rot), std::invalid_argument);
  FieldSpec cantor = default_spec(FieldKind::kFatCantor);
  cantor.level = -1;
  EXPECT_THROW(make_field(cantor), std::invalid_argument);
}

TEST(Field, EvalFieldChecksDomain) {
  const BoundedField f = make_field(default_spec(FieldKind::kSign));
  const std::vector<double> x{0.1};
  EXPECT_THROW(eval_field(f, -0.1, x, 1.0), std::domain_error);
  EXPECT_THROW(eval_field(f, 1.5, x, 1.0), std::domain_error);
  const std::vector<double> nan{std::nan("")};
  EXPECT_THROW(eval_field(f, 0.5, nan, 1.0), std::domain_error);
  const std::vector<double> inf{INFINITY};
  EXPECT_THROW(eval_field(f, 0.5, inf, 1.0), std::domain_error);
  EXPECT_EQ(eval_field(f, 1.0, x, 1.0)[0], -1.0);
}

TEST(Field, IdsRoundTrip) {
  for (FieldKind kind : gallery_kinds()) EXPECT_EQ(field_kind_from_id(field_id(kind)), kind);
  EXPECT_EQ(gallery_kinds().size(), 6u);
}

TEST(FieldProperty, BoundHoldsOnRandomSamples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  std::uniform_real_distribution<double> wide(-10.0, 10.0);
  std::uniform_real_distribution<double> unit(-0.5, 1.5);
  for (FieldKind kind : gallery_kinds()) {
    const BoundedField f = make_field(default_spec(kind));
    std::vector<double> x(f.dimension());
    std::vector<double> v(f.dimension());
    for (int k = 0; k < 10000; ++k) {
      for (double& xi : x) xi = kind == FieldKind::kFatCantor ? unit(rng) : wide(rng);
      f.evaluate(time(rng), x, v);
      ASSERT_LE(euclidean_norm(v), f.bound()) << f.id();
    }
  }
}

TEST(FieldProperty, EvaluationIsBitwiseDeterministic) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> wide(-3.0, 3.0);
  for (FieldKind kind : gallery_kinds()) {
    const BoundedField f = make_field(default_spec(kind));
    std::vector<double> x(f.dimension());
    for (int k = 0; k < 200; ++k) {
      for (double& xi : x) xi = wide(rng);
      EXPECT_EQ(f(0.25, x), f(0.25, x));
    }
  }
}

// Integer oracle: endpoints scaled by 2^(2L+1) are exact integers.
std::vector<std::pair<std::uint64_t, std::uint64_t>> cantor_oracle(int level) {
  const std::uint64_t denom = std::uint64_t{1} << (2 * level + 1);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cur{{0, denom}};
  for (int n = 1; n <= level; ++n) {
    const std::uint64_t gap = denom >> (2 * n);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> next;
    for (auto [a, b] : cur) {
      const std::uint64_t mid2 = a + b;
      next.emplace_back(a, (mid2 - gap) / 2);
      next.emplace_back((mid2 + gap) / 2, b);
    }
    cur = std::move(next);
  }
  return cur;
}

TEST(FatCantor, MatchesIntegerOracle) {
  for (int level = 0; level <= 10; ++level) {
    const IntervalSet set = fat_cantor_set(level);
    const auto oracle = cantor_oracle(level);
    const double denom = std::ldexp(1.0, 2 * level + 1);
    ASSERT_EQ(set.size(), oracle.size());
    ASSERT_EQ(set.size(), std::size_t{1} << level);
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      EXPECT_EQ(set.intervals()[k].lo, static_cast<double>(oracle[k].first) / denom);
      EXPECT_EQ(set.intervals()[k].hi, static_cast<double>(oracle[k].second) / denom);
    }
  }
}

TEST(FatCantor, KnownLevels) {
  const IntervalSet one = fat_cantor_set(1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one.intervals()[0], (Interval{0.0, 0.375}));
  EXPECT_EQ(one.intervals()[1], (Interval{0.625, 1.0}));
  EXPECT_EQ(fat_cantor_set(0).length(), 1.0);
  EXPECT_NEAR(fat_cantor_set(8).length(), 0.501953125, 1e-12);
}

TEST(FatCantor, LengthFormulaMonotoneAndNested) {
  double prev_len = 2.0;
  double prev_max = 2.0;
  for (int level = 0; level <= 16; ++level) {
    const IntervalSet set = fat_cantor_set(level);
    EXPECT_NEAR(set.length(), 1.0 - 0.5 * (1.0 - std::ldexp(1.0, -level)), 1e-12);
    EXPECT_LT(set.length(), prev_len);
    EXPECT_GT(set.length(), 0.5);
    EXPECT_LT(set.max_interval_length(), prev_max);
    EXPECT_LE(set.max_interval_length(), std::ldexp(1.0, -level));
    if (level > 0) EXPECT_TRUE(fat_cantor_set(level - 1).contains_set(set));
    prev_len = set.length();
    prev_max = set.max_interval_length();
  }
  EXPECT_THROW(fat_cantor_set(-1), std::invalid_argument);
}

TEST(FatCantor, Membership) {
  const IntervalSet one = fat_cantor_set(1);
  EXPECT_TRUE(interval_membership(one, 0.0));
  EXPECT_TRUE(interval_membership(one, 0.375));
  EXPECT_FALSE(interval_membership(one, 0.5));
  EXPECT_FALSE(interval_membership(one, 1.5));
  EXPECT_TRUE(interval_membership(fat_cantor_set(0), 0.3));
}

TEST(FatCantor, MeasureWithinMatchesIntervalSum) {
  const IntervalSet set = fat_cantor_set(5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int k = 0; k < 500; ++k) {
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    double expected = 0.0;
    for (const Interval& iv : set.intervals()) {
      expected += std::max(0.0, std::min(b, iv.hi) - std::max(a, iv.lo));
    }
    EXPECT_NEAR(set.measure_within(a, b), expected, 1e-14);
  }
}

}  // namespace
}  // namespace charflow
