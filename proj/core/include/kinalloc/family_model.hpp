#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinalloc/fitness.hpp"
#include "kinalloc/matrix.hpp"

namespace kinalloc {

/// Absolute slack allowed on a budget row sum when validating a profile.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct Violation {
  std::optional<std::size_t> row;     // offending individual / source
  std::optional<std::size_t> column;  // offending target, when a pair is at fault
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Violations are data: an empty list means the object is well formed.
struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  std::string to_string() const;
};

/// An immutable family: who is in it, how much each can invest, how related
/// each source is to each target, and how each target turns investment into
/// personal fitness. Relatedness rows are indexed by source, columns by target.
class FamilyGame {
 public:
  FamilyGame(std::vector<std::string> individuals, std::vector<double> budgets,
             Matrix relatedness, std::vector<FitnessFunction> fitness);

  std::size_t size() const { return individuals_.size(); }
  const std::vector<std::string>& individuals() const { return individuals_; }
  const std::vector<double>& budgets() const { return budgets_; }
  const Matrix& relatedness() const { return relatedness_; }
  const std::vector<FitnessFunction>& fitness() const { return fitness_; }

  double budget(std::size_t s) const { return budgets_.at(s); }
  double relatedness(std::size_t s, std::size_t t) const { return relatedness_(s, t); }
  const FitnessFunction& fitness(std::size_t t) const { return fitness_.at(t); }

  /// Index of an individual by id; throws std::out_of_range if absent.
  std::size_t index_of(const std::string& id) const;

  /// Copies with one ingredient replaced; used by parameter sweeps and
  /// invariance checks.
  FamilyGame with_budget(std::size_t s, double budget) const;
  FamilyGame with_relatedness(std::size_t s, std::size_t t, double r) const;
  FamilyGame with_relatedness(Matrix r) const;
  FamilyGame with_fitness(std::size_t t, FitnessFunction f) const;

  /// Relabels individuals: new index k holds old individual perm[k].
  FamilyGame permuted(std::span<const std::size_t> perm) const;

  friend bool operator==(const FamilyGame&, const FamilyGame&) = default;

 private:
  std::vector<std::string> individuals_;
  std::vector<double> budgets_;
  Matrix relatedness_;
  std::vector<FitnessFunction> fitness_;
};

/// Investment matrix x(s, t): row = source, column = target.
using AllocationProfile = Matrix;

/// Spend-on-self profile diag(budgets).
AllocationProfile self_investment_profile(const FamilyGame& game);

ValidationResult validate_game(const FamilyGame& game);

/// Throws std::invalid_argument on a dimension mismatch.
ValidationResult validate_profile(const FamilyGame& game, const AllocationProfile& x,
                                  double feasibility_tol = kFeasibilityTolerance);

/// Column sums: total investment received by each target.
std::vector<double> incoming_investment(const AllocationProfile& x);

/// sum_t r(i,t) f_t(incoming_t). Throws std::out_of_range for a bad index.
double inclusive_fitness(const FamilyGame& game, const AllocationProfile& x, std::size_t i);
double inclusive_fitness_from_incoming(const FamilyGame& game, std::span<const double> incoming,
                                       std::size_t i);

ExtendedReal fitness_marginal(const FitnessFunction& f, double x);
ExtendedReal marginal_inverse(const FitnessFunction& f, double lambda);

}  // namespace kinalloc
