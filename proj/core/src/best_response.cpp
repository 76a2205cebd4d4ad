#include "kinalloc/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinalloc {

namespace {

constexpr double kLinearTieTolerance = 1e-12;

void check_source(const FamilyGame& game, std::size_t s, std::span<const double> vec) {
  if (s >= game.size()) throw std::out_of_range("unknown source index");
  if (vec.size() != game.size())
    throw std::invalid_argument("investment vector length does not match the game");
  for (double v : vec)
    if (!(v >= 0.0)) throw std::domain_error("investment vector must be nonnegative");
}

// Demand of one strictly concave target at level lambda.
double concave_demand(const FitnessFunction& f, double r, double external, double lambda) {
  return std::max(0.0, f.marginal_inverse(lambda / r).value - external);
}

struct TargetSplit {
  std::vector<std::size_t> concave;  // strictly concave targets with r > 0
  std::vector<std::size_t> linear;   // Linear targets with r > 0
  double linear_level = 0.0;         // max r w over linear targets
};

TargetSplit split_targets(const FamilyGame& game, std::size_t s) {
  TargetSplit split;
  for (std::size_t t = 0; t < game.size(); ++t) {
    const double r = game.relatedness(s, t);
    if (r <= 0.0) continue;
    if (game.fitness(t).strictly_concave()) {
      split.concave.push_back(t);
    } else {
      split.linear.push_back(t);
      split.linear_level = std::max(split.linear_level, r * game.fitness(t).weight());
    }
  }
  return split;
}

double concave_spend(const FamilyGame& game, std::size_t s, const TargetSplit& split,
                     std::span<const double> external, double lambda) {
  double total = 0.0;
  for (std::size_t t : split.concave)
    total += concave_demand(game.fitness(t), game.relatedness(s, t), external[t], lambda);
  return total;
}

}  // namespace

std::vector<ExtendedReal> adjusted_marginal(const FamilyGame& game, std::size_t s,
                                            std::span<const double> incoming) {
  check_source(game, s, incoming);
  std::vector<ExtendedReal> out(game.size());
  for (std::size_t t = 0; t < game.size(); ++t) {
    const double r = game.relatedness(s, t);
    if (r == 0.0) {
      out[t] = ExtendedReal::finite(0.0);
      continue;
    }
    const ExtendedReal m = game.fitness(t).marginal(incoming[t]);
    out[t] = m.infinite ? m : ExtendedReal::finite(r * m.value);
  }
  return out;
}

ExtendedReal spend_at_multiplier(const FamilyGame& game, std::size_t s,
                                 std::span<const double> external, double lambda) {
  check_source(game, s, external);
  if (!(lambda > 0.0)) throw std::domain_error("multiplier must be positive");
  double total = 0.0;
  for (std::size_t t = 0; t < game.size(); ++t) {
    const double r = game.relatedness(s, t);
    if (r == 0.0) continue;
    const ExtendedReal x = game.fitness(t).marginal_inverse(lambda / r);
    if (x.infinite) return ExtendedReal::infinity();
    total += std::max(0.0, x.value - external[t]);
  }
  return ExtendedReal::finite(total);
}

BestResponseResult water_fill(const FamilyGame& game, std::size_t s,
                              std::span<const double> external) {
  check_source(game, s, external);
  const std::size_t n = game.size();
  const double budget = game.budget(s);
  const TargetSplit split = split_targets(game, s);

  BestResponseResult result;
  result.allocation.assign(n, 0.0);

  // Ceiling of the concave targets' adjusted marginals at zero own investment.
  double ceiling = 0.0;
  bool infinite_ceiling = false;
  double largest_finite = 0.0;
  for (std::size_t t : split.concave) {
    const ExtendedReal m = game.fitness(t).marginal(external[t]);
    if (m.infinite) {
      infinite_ceiling = true;
    } else {
      ceiling = std::max(ceiling, game.relatedness(s, t) * m.value);
    }
  }
  largest_finite = std::max(ceiling, split.linear_level);

  if (!infinite_ceiling && largest_finite <= 0.0) {
    result.allocation[s] = budget;
    result.active_set = {s};
    result.degenerate = true;
    return result;
  }

  const double floor_level = split.linear_level;
  if (floor_level > 0.0 &&
      concave_spend(game, s, split, external, floor_level) <= budget) {
    // The concave targets saturate below the linear plateau.
    double used = 0.0;
    for (std::size_t t : split.concave) {
      const double x = concave_demand(game.fitness(t), game.relatedness(s, t), external[t], floor_level);
      result.allocation[t] = x;
      used += x;
    }
    std::vector<std::size_t> tied;
    for (std::size_t t : split.linear) {
      const double level = game.relatedness(s, t) * game.fitness(t).weight();
      if (level >= floor_level * (1.0 - kLinearTieTolerance)) tied.push_back(t);
    }
    const double share = std::max(0.0, budget - used) / static_cast<double>(tied.size());
    for (std::size_t t : tied) result.allocation[t] += share;
    result.multiplier = floor_level;
  } else {
    // Bracket lambda with spend(lo) >= budget >= spend(hi).
    double hi = 0.0;
    if (infinite_ceiling) {
      hi = std::max(largest_finite, 1.0);
      for (int k = 0; k < 2100 && concave_spend(game, s, split, external, hi) > budget; ++k) hi *= 2.0;
    } else {
      hi = ceiling;
    }
    double lo = floor_level;
    if (lo <= 0.0) {
      lo = hi;
      for (int k = 0; k < 2100 && concave_spend(game, s, split, external, lo) < budget; ++k) {
        hi = lo;
        lo *= 0.5;
      }
    }

    double lambda = 0.5 * (lo + hi);
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
      const double mid = (hi > 4.0 * lo && lo > 0.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (!(lo < mid && mid < hi)) break;  // bracket exhausted at double resolution
      lambda = mid;
      ++result.bisection_steps;
      const double spend = concave_spend(game, s, split, external, lambda);
      if (std::abs(spend - budget) <= kBestResponseTolerance) break;
      if (spend > budget) {
        lo = lambda;
      } else {
        hi = lambda;
      }
    }
    double used = 0.0;
    for (std::size_t t : split.concave) {
      const double x = concave_demand(game.fitness(t), game.relatedness(s, t), external[t], lambda);
      result.allocation[t] = x;
      used += x;
    }
    if (used > 0.0) {
      const double factor = budget / used;
      for (std::size_t t : split.concave) result.allocation[t] *= factor;
    } else {
      // Only reachable when bisection collapsed onto the ceiling; put the
      // budget on the best concave target.
      std::size_t best = split.concave.front();
      double best_level = -1.0;
      for (std::size_t t : split.concave) {
        const double level = game.relatedness(s, t) * game.fitness(t).marginal(external[t]).as_double();
        if (level > best_level) {
          best_level = level;
          best = t;
        }
      }
      result.allocation[best] = budget;
    }
    result.multiplier = lambda;
  }

  for (std::size_t t = 0; t < n; ++t)
    if (result.allocation[t] > 0.0) result.active_set.push_back(t);
  return result;
}

std::vector<double> external_investment(const AllocationProfile& x, std::size_t s) {
  std::vector<double> external(x.cols(), 0.0);
  for (std::size_t u = 0; u < x.rows(); ++u) {
    if (u == s) continue;
    for (std::size_t t = 0; t < x.cols(); ++t) external[t] += x(u, t);
  }
  return external;
}

double response_value(const FamilyGame& game, std::size_t s, std::span<const double> external,
                      std::span<const double> allocation) {
  double total = 0.0;
  for (std::size_t t = 0; t < game.size(); ++t) {
    const double r = game.relatedness(s, t);
    if (r != 0.0) total += r * game.fitness(t).value(external[t] + allocation[t]);
  }
  return total;
}

}  // namespace kinalloc
