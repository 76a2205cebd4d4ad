#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "kinalloc/family_model.hpp"
#include "kinalloc/fitness.hpp"

namespace kinalloc {
namespace {

std::vector<FitnessFunction> sample_curves() {
  return {FitnessFunction::log(1, 1),        FitnessFunction::log(7.5, 0.2),
          FitnessFunction::power(1, 0, 0.5), FitnessFunction::power(2, 1.5, 0.3),
          FitnessFunction::sat_exp(1, 1),    FitnessFunction::sat_exp(4, 0.4),
          FitnessFunction::linear(2)};
}

TEST(FitnessTest, ZeroAtZero) {
  for (const auto& f : sample_curves()) EXPECT_EQ(f.value(0.0), 0.0) << to_string(f.kind());
}

TEST(FitnessTest, MarginalExamples) {
  EXPECT_DOUBLE_EQ(fitness_marginal(FitnessFunction::log(1, 1), 1.0).value, 0.5);
  for (double x : {0.0, 0.3, 12.0}) EXPECT_EQ(fitness_marginal(FitnessFunction::linear(2), x).value, 2.0);
  EXPECT_DOUBLE_EQ(fitness_marginal(FitnessFunction::sat_exp(1, 1), 0.0).value, 1.0);
}

TEST(FitnessTest, PowerWithoutOffsetHasInfiniteMarginalAtZeroOnly) {
  const auto f = FitnessFunction::power(1, 0, 0.5);
  const ExtendedReal at_zero = f.marginal(0.0);
  EXPECT_TRUE(at_zero.infinite);
  EXPECT_TRUE(std::isinf(at_zero.as_double()));
  const ExtendedReal at_one = f.marginal(1.0);
  EXPECT_FALSE(at_one.infinite);
  EXPECT_DOUBLE_EQ(at_one.value, 0.5);
  EXPECT_FALSE(FitnessFunction::power(1, 0.1, 0.5).marginal(0.0).infinite);
}

TEST(FitnessTest, NegativeInvestmentIsRejected) {
  EXPECT_THROW(fitness_marginal(FitnessFunction::log(1, 1), -1e-3), std::domain_error);
  EXPECT_THROW(FitnessFunction::log(1, 1).value(-1.0), std::domain_error);
}

TEST(FitnessTest, MarginalInverseExamples) {
  EXPECT_DOUBLE_EQ(marginal_inverse(FitnessFunction::log(1, 1), 0.5).value, 1.0);
  EXPECT_DOUBLE_EQ(marginal_inverse(FitnessFunction::power(1, 0, 0.5), 0.5).value, 1.0);
  // At or above f'(0) nothing is demanded.
  EXPECT_EQ(marginal_inverse(FitnessFunction::log(1, 1), 1.0).value, 0.0);
  EXPECT_EQ(marginal_inverse(FitnessFunction::sat_exp(2, 1), 3.0).value, 0.0);
  EXPECT_EQ(marginal_inverse(FitnessFunction::power(2, 1, 0.5), 1.0).value, 0.0);
  EXPECT_EQ(marginal_inverse(FitnessFunction::linear(2), 2.0).value, 0.0);
  EXPECT_TRUE(marginal_inverse(FitnessFunction::linear(2), 1.9).infinite);
}

TEST(FitnessTest, MarginalInverseRejectsNonPositiveLevel) {
  EXPECT_THROW(marginal_inverse(FitnessFunction::log(1, 1), 0.0), std::domain_error);
  EXPECT_THROW(marginal_inverse(FitnessFunction::log(1, 1), -2.0), std::domain_error);
}

TEST(FitnessTest, ParameterErrors) {
  EXPECT_TRUE(FitnessFunction::log(1, 1).parameter_errors().empty());
  EXPECT_FALSE(FitnessFunction::log(1, 0).parameter_errors().empty());
  EXPECT_FALSE(FitnessFunction::log(0, 1).parameter_errors().empty());
  EXPECT_FALSE(FitnessFunction::power(1, 0, 1.0).parameter_errors().empty());
  EXPECT_FALSE(FitnessFunction::power(1, -0.1, 0.5).parameter_errors().empty());
  EXPECT_TRUE(FitnessFunction::power(1, 0, 0.5).parameter_errors().empty());
  EXPECT_FALSE(FitnessFunction::sat_exp(1, 0).parameter_errors().empty());
  EXPECT_FALSE(FitnessFunction::linear(-1).parameter_errors().empty());
}

TEST(FitnessTest, KindNames) {
  for (auto kind : {FitnessKind::Log, FitnessKind::Power, FitnessKind::SatExp, FitnessKind::Linear})
    EXPECT_EQ(fitness_kind_from_string(to_string(kind)), kind);
  EXPECT_EQ(fitness_kind_from_string("SatExp"), FitnessKind::SatExp);
  EXPECT_THROW(fitness_kind_from_string("sigmoid"), std::invalid_argument);
}

// Sampled monotonicity and concavity: x < y gives f(x) <= f(y), f'(x) >= f'(y).
TEST(FitnessProperty, NondecreasingAndConcave) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (const auto& f : sample_curves()) {
    for (int k = 0; k < 500; ++k) {
      double x = u(rng), y = u(rng);
      if (x > y) std::swap(x, y);
      EXPECT_LE(f.value(x), f.value(y));
      EXPECT_FALSE(f.marginal(x) < f.marginal(y)) << to_string(f.kind()) << " x=" << x << " y=" << y;
    }
  }
}

TEST(FitnessProperty, MarginalMatchesCentralDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 10.0);
  for (const auto& f : sample_curves()) {
    for (int k = 0; k < 100; ++k) {
      const double x = u(rng);
      const double h = 1e-6 * std::max(1.0, x);
      const double fd = (f.value(x + h) - f.value(x - h)) / (2 * h);
      const double d = f.marginal(x).value;
      EXPECT_LE(std::abs(d - fd), 1e-6 * std::max(1.0, std::abs(d))) << to_string(f.kind()) << " at " << x;
    }
  }
}

TEST(FitnessProperty, InverseUndoesMarginalForStrictlyConcaveKinds) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 30.0);
  for (const auto& f : sample_curves()) {
    if (!f.strictly_concave()) continue;
    for (int k = 0; k < 200; ++k) {
      const double x = u(rng);
      const double back = f.marginal_inverse(f.marginal(x).value).value;
      EXPECT_NEAR(back, x, 1e-10 * x) << to_string(f.kind());
    }
  }
}

}  // namespace
}  // namespace kinalloc
