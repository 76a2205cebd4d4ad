#include "kinalloc/family_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kinalloc {

std::string ValidationResult::to_string() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    const auto& v = violations[k];
    if (k) out << "; ";
    out << v.message;
    if (v.row && v.column) {
      out << " at (" << *v.row << ", " << *v.column << ")";
    } else if (v.row) {
      out << " at index " << *v.row;
    }
  }
  return out.str();
}

FamilyGame::FamilyGame(std::vector<std::string> individuals, std::vector<double> budgets,
                       Matrix relatedness, std::vector<FitnessFunction> fitness)
    : individuals_(std::move(individuals)),
      budgets_(std::move(budgets)),
      relatedness_(std::move(relatedness)),
      fitness_(std::move(fitness)) {
  const std::size_t n = individuals_.size();
  if (budgets_.size() != n || fitness_.size() != n || relatedness_.rows() != n ||
      relatedness_.cols() != n) {
    throw std::invalid_argument("family game ingredients disagree on the number of individuals");
  }
}

std::size_t FamilyGame::index_of(const std::string& id) const {
  const auto it = std::find(individuals_.begin(), individuals_.end(), id);
  if (it == individuals_.end()) throw std::out_of_range("unknown individual '" + id + "'");
  return static_cast<std::size_t>(it - individuals_.begin());
}

FamilyGame FamilyGame::with_budget(std::size_t s, double budget) const {
  FamilyGame copy = *this;
  copy.budgets_.at(s) = budget;
  return copy;
}

FamilyGame FamilyGame::with_relatedness(std::size_t s, std::size_t t, double r) const {
  if (s >= size() || t >= size()) throw std::out_of_range("relatedness index out of range");
  FamilyGame copy = *this;
  copy.relatedness_(s, t) = r;
  return copy;
}

FamilyGame FamilyGame::with_relatedness(Matrix r) const {
  return FamilyGame(individuals_, budgets_, std::move(r), fitness_);
}

FamilyGame FamilyGame::with_fitness(std::size_t t, FitnessFunction f) const {
  FamilyGame copy = *this;
  copy.fitness_.at(t) = f;
  return copy;
}

FamilyGame FamilyGame::permuted(std::span<const std::size_t> perm) const {
  const std::size_t n = size();
  if (perm.size() != n) throw std::invalid_argument("permutation has the wrong length");
  std::vector<std::string> ids(n);
  std::vector<double> budgets(n);
  std::vector<FitnessFunction> fitness(n);
  Matrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    ids[k] = individuals_.at(perm[k]);
    budgets[k] = budgets_[perm[k]];
    fitness[k] = fitness_[perm[k]];
    for (std::size_t l = 0; l < n; ++l) r(k, l) = relatedness_(perm[k], perm[l]);
  }
  return FamilyGame(std::move(ids), std::move(budgets), std::move(r), std::move(fitness));
}

AllocationProfile self_investment_profile(const FamilyGame& game) {
  return Matrix::diagonal(game.budgets());
}

ValidationResult validate_game(const FamilyGame& game) {
  ValidationResult result;
  auto& out = result.violations;
  const std::size_t n = game.size();
  if (n == 0) out.push_back({std::nullopt, std::nullopt, "a family needs at least one individual"});

  std::set<std::string> seen;
  for (std::size_t s = 0; s < n; ++s) {
    if (!seen.insert(game.individuals()[s]).second)
      out.push_back({s, std::nullopt, "duplicate individual id '" + game.individuals()[s] + "'"});
  }
  for (std::size_t s = 0; s < n; ++s) {
    const double b = game.budget(s);
    if (!(std::isfinite(b) && b > 0.0)) out.push_back({s, std::nullopt, "budget must be positive"});
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const double r = game.relatedness(s, t);
      if (s == t) {
        if (r != 1.0) out.push_back({s, t, "diagonal relatedness must equal 1"});
      } else if (!(r >= 0.0 && r <= 1.0)) {
        out.push_back({s, t, "relatedness must lie in [0,1]"});
      }
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    for (auto& msg : game.fitness(t).parameter_errors())
      out.push_back({t, std::nullopt, "bad fitness parameters: " + msg});
  }
  return result;
}

ValidationResult validate_profile(const FamilyGame& game, const AllocationProfile& x,
                                  double feasibility_tol) {
  const std::size_t n = game.size();
  if (x.rows() != n || x.cols() != n)
    throw std::invalid_argument("allocation profile dimensions do not match the game");
  ValidationResult result;
  for (std::size_t s = 0; s < n; ++s) {
    double spent = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = x(s, t);
      if (!std::isfinite(v)) {
        result.violations.push_back({s, t, "non-finite investment"});
      } else if (v < 0.0) {
        result.violations.push_back({s, t, "negative investment"});
      }
      spent += v;
    }
    if (spent > game.budget(s) + feasibility_tol)
      result.violations.push_back({s, std::nullopt, "budget exceeded"});
  }
  return result;
}

std::vector<double> incoming_investment(const AllocationProfile& x) {
  std::vector<double> incoming(x.cols(), 0.0);
  for (std::size_t s = 0; s < x.rows(); ++s)
    for (std::size_t t = 0; t < x.cols(); ++t) incoming[t] += x(s, t);
  return incoming;
}

double inclusive_fitness_from_incoming(const FamilyGame& game, std::span<const double> incoming,
                                       std::size_t i) {
  if (i >= game.size()) throw std::out_of_range("unknown individual index");
  double total = 0.0;
  for (std::size_t t = 0; t < game.size(); ++t) {
    const double r = game.relatedness(i, t);
    if (r != 0.0) total += r * game.fitness(t).value(incoming[t]);
  }
  return total;
}

double inclusive_fitness(const FamilyGame& game, const AllocationProfile& x, std::size_t i) {
  if (x.rows() != game.size() || x.cols() != game.size())
    throw std::invalid_argument("allocation profile dimensions do not match the game");
  const auto incoming = incoming_investment(x);
  return inclusive_fitness_from_incoming(game, incoming, i);
}

ExtendedReal fitness_marginal(const FitnessFunction& f, double x) { return f.marginal(x); }

ExtendedReal marginal_inverse(const FitnessFunction& f, double lambda) {
  return f.marginal_inverse(lambda);
}

}  // namespace kinalloc
