#include "kinalloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "kinalloc/best_response.hpp"

namespace kinalloc {

namespace {

// Lattice walk in lexicographic order; keeps the first strict maximum.
class LatticeSearch {
 public:
  LatticeSearch(std::vector<std::vector<double>> table, std::uint64_t units)
      : table_(std::move(table)), units_(units), current_(table_.size(), 0), best_(table_.size(), 0) {}

  void run() {
    if (table_.size() == 1) {
      current_[0] = units_;
      consider(table_[0][units_]);
      return;
    }
    walk(0, units_, 0.0);
  }

  const std::vector<std::uint64_t>& best() const { return best_; }
  double best_value() const { return best_value_; }
  std::uint64_t visited() const { return visited_; }

 private:
  void walk(std::size_t depth, std::uint64_t remaining, double partial) {
    if (depth + 1 == table_.size()) {
      current_[depth] = remaining;
      consider(partial + table_[depth][remaining]);
      return;
    }
    for (std::uint64_t k = 0; k <= remaining; ++k) {
      current_[depth] = k;
      walk(depth + 1, remaining - k, partial + table_[depth][k]);
    }
  }

  void consider(double value) {
    ++visited_;
    if (value > best_value_) {
      best_value_ = value;
      best_ = current_;
    }
  }

  std::vector<std::vector<double>> table_;
  std::uint64_t units_;
  std::vector<std::uint64_t> current_;
  std::vector<std::uint64_t> best_;
  double best_value_ = -std::numeric_limits<double>::infinity();
  std::uint64_t visited_ = 0;
};

// Uniform double in [0,1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

}  // namespace

std::uint64_t lattice_units(double budget, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const double cells = std::round(budget / step);
  if (cells >= 1e18) return std::numeric_limits<std::uint64_t>::max();
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cells));
}

std::uint64_t lattice_size(std::size_t n, std::uint64_t units) {
  // C(units + n - 1, n - 1), built incrementally so every partial product is
  // itself a binomial coefficient.
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (n == 0) return 0;
  __extension__ using Wide = unsigned __int128;
  Wide count = 1;
  for (std::uint64_t k = 1; k < n; ++k) {
    count = count * (units + k) / k;
    if (count > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(count);
}

GridResponse grid_best_response(const FamilyGame& game, std::size_t s,
                                std::span<const double> external, const GridSpec& spec) {
  if (s >= game.size()) throw std::out_of_range("unknown source index");
  if (external.size() != game.size())
    throw std::invalid_argument("external investment length does not match the game");
  const std::size_t n = game.size();
  const double budget = game.budget(s);
  const std::uint64_t units = lattice_units(budget, spec.step);
  const std::uint64_t points = lattice_size(n, units);
  if (points > kMaxGridPoints)
    throw std::length_error("grid of " + std::to_string(points) + " points exceeds the bound of " +
                            std::to_string(kMaxGridPoints));

  const double cell = budget / static_cast<double>(units);
  std::vector<std::vector<double>> table(n, std::vector<double>(units + 1, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    const double r = game.relatedness(s, t);
    if (r == 0.0) continue;
    for (std::uint64_t k = 0; k <= units; ++k)
      table[t][k] = r * game.fitness(t).value(external[t] + cell * static_cast<double>(k));
  }

  LatticeSearch search(std::move(table), units);
  search.run();

  GridResponse out;
  out.allocation.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.allocation[t] = cell * static_cast<double>(search.best()[t]);
  // Re-evaluate in the canonical order so values compare with response_value.
  out.value = response_value(game, s, external, out.allocation);
  out.points = search.visited();
  return out;
}

GridNashCheck grid_nash_check(const FamilyGame& game, const AllocationProfile& x,
                              const GridSpec& spec, bool parallel) {
  const std::size_t n = game.size();
  if (x.rows() != n || x.cols() != n)
    throw std::invalid_argument("allocation profile dimensions do not match the game");
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  auto scan = [&](std::size_t s) {
    const auto external = external_investment(x, s);
    const double current = response_value(game, s, external, x.row(s));
    GridResponse grid = grid_best_response(game, s, external, spec);
    return std::make_pair(grid.value - current, std::move(grid.allocation));
  };

  std::vector<std::pair<double, std::vector<double>>> per_source(n);
  if (parallel && n > 1) {
    std::vector<std::future<std::pair<double, std::vector<double>>>> jobs;
    for (std::size_t s = 0; s < n; ++s) jobs.push_back(std::async(std::launch::async, scan, s));
    for (std::size_t s = 0; s < n; ++s) per_source[s] = jobs[s].get();
  } else {
    for (std::size_t s = 0; s < n; ++s) per_source[s] = scan(s);
  }

  GridNashCheck out;
  out.gains.resize(n);
  out.worst_gain = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    out.gains[s] = per_source[s].first;
    if (per_source[s].first > out.worst_gain) {
      out.worst_gain = per_source[s].first;
      out.worst_source = s;
      out.deviation = per_source[s].second;
    }
  }
  out.pass = out.worst_gain <= spec.epsilon;
  return out;
}

FamilyGame random_instance(std::uint64_t seed, const InstanceSpec& spec) {
  if (spec.n == 0) throw std::invalid_argument("random instance needs n >= 1");
  if (spec.kinds.empty()) throw std::invalid_argument("random instance needs at least one fitness kind");
  std::mt19937_64 rng(seed);
  const std::size_t n = spec.n;

  std::vector<std::string> ids(n);
  std::vector<double> budgets(n);
  std::vector<FitnessFunction> fitness(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = "i" + std::to_string(i);
    budgets[i] = uniform(rng, spec.budget_range.first, spec.budget_range.second);
    const auto pick = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(spec.kinds.size()));
    const FitnessKind kind = spec.kinds[std::min(pick, spec.kinds.size() - 1)];
    const double w = uniform(rng, 0.1, 10.0);
    const double c = uniform(rng, 0.1, 5.0);
    const double p = uniform(rng, 0.2, 0.8);
    switch (kind) {
      case FitnessKind::Log: fitness[i] = FitnessFunction::log(w, c); break;
      case FitnessKind::Power: fitness[i] = FitnessFunction::power(w, c, p); break;
      case FitnessKind::SatExp: fitness[i] = FitnessFunction::sat_exp(w, c); break;
      case FitnessKind::Linear: fitness[i] = FitnessFunction::linear(w); break;
    }
  }

  static constexpr double kKinLevels[] = {0.0, 0.125, 0.25, 0.5};
  Matrix r = Matrix::identity(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (s == t) continue;
      switch (spec.relatedness) {
        case RelatednessModel::Uniform:
          r(s, t) = unit_uniform(rng);
          break;
        case RelatednessModel::Symmetric:
          if (t > s) r(s, t) = r(t, s) = unit_uniform(rng);
          break;
        case RelatednessModel::Kin:
          if (t > s) r(s, t) = r(t, s) = kKinLevels[rng() % 4];
          break;
      }
    }
  }
  return FamilyGame(std::move(ids), std::move(budgets), std::move(r), std::move(fitness));
}

}  // namespace kinalloc
