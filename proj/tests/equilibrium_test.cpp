#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "kinalloc/equilibrium.hpp"
#include "kinalloc/oracle.hpp"
#include "test_games.hpp"

namespace kinalloc {
namespace {

void expect_profile_near(const Matrix& actual, const Matrix& expected, double tol) {
  ASSERT_EQ(actual.rows(), expected.rows());
  for (std::size_t s = 0; s < actual.rows(); ++s)
    for (std::size_t t = 0; t < actual.cols(); ++t)
      EXPECT_NEAR(actual(s, t), expected(s, t), tol) << "entry (" << s << "," << t << ")";
}

TEST(SolveNash, UnrelatedIndividualsKeepTheirBudgets) {
  const auto report = solve_nash(testing::zero_relatedness_game());
  EXPECT_TRUE(report.diagnostics.converged);
  expect_profile_near(report.profile, Matrix{{1, 0}, {0, 1}}, 1e-12);
}

TEST(SolveNash, SymmetricHalfSiblingsStayHome) {
  const auto report = solve_nash(testing::mutual_half_game());
  EXPECT_TRUE(report.certificate.certified);
  expect_profile_near(report.profile, Matrix{{1, 0}, {0, 1}}, 1e-9);
}

TEST(SolveNash, ParentSharesWithChild) {
  const auto report = solve_nash(testing::parent_child_game());
  ASSERT_TRUE(report.diagnostics.converged);
  expect_profile_near(report.profile, Matrix{{2.4, 0.6}, {0.0, 0.1}}, 1e-6);
  EXPECT_NEAR(report.incoming[0], 2.4, 1e-6);
  EXPECT_NEAR(report.incoming[1], 0.7, 1e-6);
  EXPECT_NEAR(report.certificate.lambda[0], 1.0 / 3.4, 1e-8);
}

TEST(SolveNash, ParentGivesEverythingAway) {
  const auto report = solve_nash(testing::totally_altruistic_game());
  ASSERT_TRUE(report.diagnostics.converged);
  EXPECT_LE(report.profile(0, 0), kSupportTolerance);
  EXPECT_NEAR(report.profile(0, 1), 1.0, 1e-9);
  EXPECT_EQ(report.classification.totally_altruistic, (std::vector<std::size_t>{0}));
}

TEST(SolveNash, LeavesHeadroomBelowTheTolerance) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto report = solve_nash(random_instance(seed, {.n = 5}));
    ASSERT_TRUE(report.diagnostics.converged);
    EXPECT_LE(report.certificate.residuals.complementarity, kKktTolerance / 10) << "seed " << seed;
  }
}

TEST(SolveNash, SimultaneousModeReachesTheSameEquilibrium) {
  SolveOptions options;
  options.mode = SolveMode::Simultaneous;
  const auto report = solve_nash(testing::parent_child_game(), options);
  ASSERT_TRUE(report.diagnostics.converged);
  EXPECT_EQ(report.diagnostics.mode, SolveMode::Simultaneous);
  expect_profile_near(report.profile, Matrix{{2.4, 0.6}, {0.0, 0.1}}, 1e-6);
}

TEST(SolveNash, IterationBudgetExhaustionIsReported) {
  SolveOptions options;
  options.max_iterations = 0;
  const auto report = solve_nash(testing::parent_child_game(), options);
  EXPECT_FALSE(report.diagnostics.converged);
  EXPECT_FALSE(report.certificate.certified);
}

TEST(SolveNash, ModeNames) {
  EXPECT_EQ(solve_mode_from_string("round_robin"), SolveMode::RoundRobin);
  EXPECT_EQ(solve_mode_from_string(to_string(SolveMode::Simultaneous)), SolveMode::Simultaneous);
  EXPECT_THROW(solve_mode_from_string("gauss"), std::invalid_argument);
}

TEST(KktVerify, EquilibriumCertifies) {
  const auto cert = kkt_verify(testing::parent_child_game(), Matrix{{2.4, 0.6}, {0.0, 0.1}});
  EXPECT_TRUE(cert.certified);
  EXPECT_LE(cert.residuals.worst(), 1e-12);
  EXPECT_NEAR(cert.mu(1, 0), 1.0 / 1.7 - 0.5 / 3.4, 1e-12);
  EXPECT_EQ(cert.mu(0, 0), 0.0);
}

TEST(KktVerify, PerturbedProfileFails) {
  const auto cert = kkt_verify(testing::parent_child_game(), Matrix{{2.3, 0.7}, {0.0, 0.1}});
  EXPECT_FALSE(cert.certified);
  EXPECT_GT(cert.residuals.complementarity, 1e-3);
}

TEST(KktVerify, UnspentBudgetShowsInTheResidual) {
  const auto cert = kkt_verify(testing::mutual_half_game(), Matrix{{0.5, 0.0}, {0.0, 1.0}});
  EXPECT_FALSE(cert.certified);
  EXPECT_DOUBLE_EQ(cert.residuals.budget, 0.5);
}

TEST(KktVerify, InadmissibleProfileThrows) {
  EXPECT_THROW(kkt_verify(testing::mutual_half_game(), Matrix{{1.5, 0.0}, {0.0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(kkt_verify(testing::mutual_half_game(), Matrix{{1.1, -0.1}, {0.0, 1.0}}), std::invalid_argument);
}

TEST(KktVerify, InfiniteMarginalAtAnUnfundedTarget) {
  // Once nobody funds the c = 0 power target its marginal is unbounded.
  const FamilyGame game({"a", "b"}, {1.0, 1.0}, Matrix{{1.0, 0.5}, {0.0, 1.0}},
                        {FitnessFunction::log(1, 1), FitnessFunction::power(1, 0, 0.5)});
  const auto cert = kkt_verify(game, Matrix{{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_TRUE(cert.certified);  // b funds itself, so its marginal is finite
  const auto zero_b = kkt_verify(game, Matrix{{1.0, 0.0}, {1.0, 0.0}});
  EXPECT_FALSE(zero_b.certified);
  EXPECT_TRUE(std::isinf(zero_b.lambda[0]));
}

TEST(Classify, ParentChild) {
  const auto c = classify(testing::parent_child_game(), Matrix{{2.4, 0.6}, {0.0, 0.1}});
  EXPECT_EQ(c.selfish, (std::vector<std::size_t>{1}));
  EXPECT_EQ(c.altruistic, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(c.totally_altruistic.empty());
  EXPECT_EQ(c.beneficiaries[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(c.argmax_adjusted[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(c.argmax_plain, (std::vector<std::size_t>{1}));
}

TEST(Classify, SupportToleranceIgnoresDust) {
  const auto c = classify(testing::mutual_half_game(), Matrix{{1.0 - 1e-12, 1e-12}, {0.0, 1.0}});
  EXPECT_EQ(c.selfish, (std::vector<std::size_t>{0, 1}));
}

TEST(SupportInclusions, HoldAtTheParentChildEquilibrium) {
  const FamilyGame game = testing::parent_child_game();
  const auto report = solve_nash(game);
  const auto props = check_support_inclusions(game, report);
  EXPECT_EQ(props.beneficiaries_in_argmax, InclusionStatus::Holds);
  EXPECT_EQ(props.argmax_plain_selfish, InclusionStatus::Holds);
  EXPECT_TRUE(props.witnesses.empty());
}

TEST(SupportInclusions, IdenticalTwinsDoNotMeetTheHypothesis) {
  const FamilyGame twins = testing::two_player(1.0, 1.0, FitnessFunction::log(1, 1), FitnessFunction::log(1, 1), 1, 1);
  const auto report = solve_nash(twins);
  ASSERT_TRUE(report.diagnostics.converged);
  const auto props = check_support_inclusions(twins, report);
  EXPECT_EQ(props.argmax_plain_selfish, InclusionStatus::HypothesisNotMet);
  EXPECT_FALSE(props.hypothesis_note.empty());
  EXPECT_EQ(props.beneficiaries_in_argmax, InclusionStatus::Holds);
}

TEST(SupportInclusions, NonEquilibriumProfileProducesWitnesses) {
  const FamilyGame game = testing::parent_child_game();
  const auto report = make_report(game, Matrix{{2.4, 0.6}, {0.05, 0.05}});
  const auto props = check_support_inclusions(game, report);
  EXPECT_EQ(props.beneficiaries_in_argmax, InclusionStatus::Violated);
  // The child's gift to the parent is off its argmax (1/1.65 > 0.5/3.45).
  const bool child_to_parent = std::any_of(props.witnesses.begin(), props.witnesses.end(),
                                           [](const InclusionWitness& w) { return w.source == 1 && w.target == 0; });
  EXPECT_TRUE(child_to_parent);
}

// Every source is at a best response: its exact best response does not improve it.
TEST(SolveNashProperty, EquilibriumIsAFixedPoint) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const FamilyGame game = random_instance(seed, {.n = 2 + seed % 5});
    const auto report = solve_nash(game);
    ASSERT_TRUE(report.diagnostics.converged) << "seed " << seed;
    for (std::size_t s = 0; s < game.size(); ++s) {
      const auto external = external_investment(report.profile, s);
      const auto br = water_fill(game, s, external);
      const double now = response_value(game, s, external, report.profile.row(s));
      EXPECT_LE(response_value(game, s, external, br.allocation), now + 1e-9 * std::max(1.0, std::abs(now)))
          << "seed " << seed << " source " << s;
    }
  }
}

TEST(SolveNashProperty, RelabelingPermutesTheEquilibrium) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FamilyGame game = random_instance(seed, {.n = 4});
    const std::size_t perm[] = {2, 0, 3, 1};
    const FamilyGame relabeled = game.permuted(perm);
    const auto a = solve_nash(game);
    const auto b = solve_nash(relabeled);
    ASSERT_TRUE(a.diagnostics.converged && b.diagnostics.converged);
    // Equilibria need not be unique, so carry one across instead of comparing.
    Matrix moved(4, 4);
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t t = 0; t < 4; ++t) moved(s, t) = a.profile(perm[s], perm[t]);
    EXPECT_TRUE(kkt_verify(relabeled, moved).certified) << "seed " << seed;
    for (std::size_t i = 0; i < 4; ++i)
      EXPECT_NEAR(inclusive_fitness(relabeled, moved, i), a.inclusive_fitness[perm[i]], 1e-12) << "seed " << seed;
  }
}

TEST(SolveNashProperty, ScalingARelatednessRowKeepsCertification) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const FamilyGame game = random_instance(seed, {.n = 3});
    const auto report = solve_nash(game);
    ASSERT_TRUE(report.diagnostics.converged);
    for (double k : {0.5, 2.0, 10.0}) {
      Matrix r = game.relatedness();
      for (std::size_t t = 0; t < 3; ++t) r(0, t) *= k;
      const FamilyGame scaled = game.with_relatedness(r);
      // Residuals scale with the row, so compare against a scaled tolerance.
      EXPECT_TRUE(kkt_verify(scaled, report.profile, kKktTolerance * std::max(1.0, k)).certified)
          << "seed " << seed << " k " << k;
    }
  }
}

}  // namespace
}  // namespace kinalloc
