#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinalloc/family_model.hpp"

namespace kinalloc {

/// Budget-mismatch tolerance of the multiplier bisection.
inline constexpr double kBestResponseTolerance = 1e-10;
inline constexpr int kMaxBisectionSteps = 200;

struct BestResponseResult {
  std::vector<double> allocation;      // the source's row x(s, .)
  double multiplier = 0.0;             // common adjusted-marginal level
  std::vector<std::size_t> active_set; // targets with positive investment
  bool degenerate = false;             // payoff-flat: every adjusted marginal is zero
  int bisection_steps = 0;
};

/// t -> r(s,t) f'_t(incoming_t). A zero relatedness annihilates an infinite
/// marginal.
std::vector<ExtendedReal> adjusted_marginal(const FamilyGame& game, std::size_t s,
                                            std::span<const double> incoming);

/// Total investment the source would demand at multiplier level lambda, given
/// what the other sources already put into each target.
ExtendedReal spend_at_multiplier(const FamilyGame& game, std::size_t s,
                                 std::span<const double> external, double lambda);

/// Exact maximizer of sum_t r(s,t) f_t(external_t + x_t) over the budget
/// simplex {x >= 0, sum x = budget(s)}.
///
/// The optimum equalizes adjusted marginals at a level lambda on its support
/// and leaves every other target at or below lambda. Strictly concave
/// targets are handled by bisection on lambda against the monotone spend
/// function. Linear targets have constant adjusted marginal; the largest of
/// those, L, floors lambda. When the concave targets alone cannot absorb the
/// budget above L, lambda = L and the remainder is split equally over the
/// Linear targets attaining L.
BestResponseResult water_fill(const FamilyGame& game, std::size_t s,
                              std::span<const double> external);

/// Incoming investment to each target from every source except s.
std::vector<double> external_investment(const AllocationProfile& x, std::size_t s);

/// The source's inclusive fitness if it plays `allocation` against `external`.
double response_value(const FamilyGame& game, std::size_t s, std::span<const double> external,
                      std::span<const double> allocation);

}  // namespace kinalloc
