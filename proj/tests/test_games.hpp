#pragma once

#include "kinalloc/family_model.hpp"

namespace kinalloc::testing {

inline FamilyGame two_player(double r12, double r21, FitnessFunction f1, FitnessFunction f2,
                             double b1, double b2, std::string id1 = "a", std::string id2 = "b") {
  return FamilyGame({std::move(id1), std::move(id2)}, {b1, b2}, Matrix{{1.0, r12}, {r21, 1.0}},
                    {f1, f2});
}

/// Mutual relatedness 1/2, unit-log fitness, budgets (3, 0.1).
inline FamilyGame parent_child_game() {
  return two_player(0.5, 0.5, FitnessFunction::log(1, 1), FitnessFunction::log(1, 1), 3.0, 0.1,
                    "parent", "child");
}

/// Child fitness weight 10: the parent gives everything away.
inline FamilyGame totally_altruistic_game() {
  return two_player(0.5, 0.5, FitnessFunction::log(1, 1), FitnessFunction::log(10, 1), 1.0, 0.1,
                    "parent", "child");
}

inline FamilyGame mutual_half_game() {
  return two_player(0.5, 0.5, FitnessFunction::log(1, 1), FitnessFunction::log(1, 1), 1.0, 1.0);
}

inline FamilyGame zero_relatedness_game() {
  return two_player(0.0, 0.0, FitnessFunction::log(1, 1), FitnessFunction::log(1, 1), 1.0, 1.0);
}

/// Single source facing the given targets: source 0 owns `budget`, the
/// other members have budget 1 and only matter as targets.
inline FamilyGame single_source(std::vector<double> r_row, std::vector<FitnessFunction> fitness,
                                double budget) {
  const std::size_t n = r_row.size();
  std::vector<std::string> ids;
  std::vector<double> budgets(n, 1.0);
  budgets[0] = budget;
  Matrix r = Matrix::identity(n);
  for (std::size_t t = 0; t < n; ++t) {
    ids.push_back("t" + std::to_string(t));
    r(0, t) = r_row[t];
  }
  return FamilyGame(std::move(ids), std::move(budgets), std::move(r), std::move(fitness));
}

}  // namespace kinalloc::testing
