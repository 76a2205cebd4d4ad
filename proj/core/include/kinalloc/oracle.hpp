#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kinalloc/family_model.hpp"

namespace kinalloc {

/// Brute-force reference computations on a budget lattice. These are test
/// instruments for families of at most a few individuals, not solvers.

inline constexpr std::uint64_t kMaxGridPoints = 10'000'000;

struct GridSpec {
  double step = 1e-2;     // lattice spacing, effort units
  double epsilon = 1e-3;  // allowed improvement for the epsilon-Nash test
};

/// Number of lattice cells the budget is cut into: round(budget / step),
/// at least 1. The effective spacing is budget / units so that every lattice
/// point spends the whole budget.
std::uint64_t lattice_units(double budget, double step);

/// Points of {k in N^n : sum k = units}, saturating at UINT64_MAX.
std::uint64_t lattice_size(std::size_t n, std::uint64_t units);

struct GridResponse {
  std::vector<double> allocation;
  double value = 0.0;
  std::uint64_t points = 0;
};

/// Exhaustive maximization of sum_t r(s,t) f_t(external_t + x_t) over the
/// lattice. Ties resolve to the lexicographically smallest allocation.
/// Throws std::length_error past kMaxGridPoints.
GridResponse grid_best_response(const FamilyGame& game, std::size_t s,
                                std::span<const double> external, const GridSpec& spec);

struct GridNashCheck {
  bool pass = true;
  double worst_gain = 0.0;            // largest improvement any source found
  std::size_t worst_source = 0;
  std::vector<double> deviation;      // that source's improving lattice row
  std::vector<double> gains;          // per source
};

/// Epsilon-Nash test: no source may gain more than spec.epsilon by moving to
/// a lattice point. Sources may be scanned on separate threads; the result
/// does not depend on it.
GridNashCheck grid_nash_check(const FamilyGame& game, const AllocationProfile& x,
                              const GridSpec& spec, bool parallel = false);

enum class RelatednessModel {
  Uniform,    // independent off-diagonal entries, U[0,1]
  Symmetric,  // U[0,1], mirrored
  Kin,        // symmetric, drawn from {0, 1/8, 1/4, 1/2}
};

struct InstanceSpec {
  std::size_t n = 2;
  std::vector<FitnessKind> kinds = {FitnessKind::Log, FitnessKind::Power, FitnessKind::SatExp};
  std::pair<double, double> budget_range = {0.1, 10.0};
  RelatednessModel relatedness = RelatednessModel::Uniform;
};

/// Deterministic in the seed. Parameters are drawn from w in [0.1,10],
/// c in [0.1,5], p in [0.2,0.8].
FamilyGame random_instance(std::uint64_t seed, const InstanceSpec& spec);

}  // namespace kinalloc
