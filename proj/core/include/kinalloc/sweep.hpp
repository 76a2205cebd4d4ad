#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kinalloc/equilibrium.hpp"

namespace kinalloc {

/// One scalar ingredient of a game.
struct ParameterPath {
  enum class Kind { Relatedness, Budget, FitnessWeight, FitnessScale, FitnessExponent };
  Kind kind = Kind::Budget;
  std::size_t first = 0;   // source, or the individual
  std::size_t second = 0;  // target (relatedness only)
};

/// "relatedness/<source>/<target>", "budget/<id>" or "fitness/<id>/<w|c|p>".
/// Throws InputError for malformed paths or unknown ids.
ParameterPath parse_parameter_path(std::string_view text, const FamilyGame& game);

FamilyGame with_parameter(const FamilyGame& game, const ParameterPath& path, double value);

struct SweepSpec {
  ParameterPath parameter;
  double from = 0.0;
  double to = 1.0;
  int steps = 11;
  SolveOptions options;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  double value = 0.0;
  EquilibriumReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // parameter order
  int unconverged = 0;
};

/// Evenly spaced values from..to inclusive (a single step uses `from`).
std::vector<double> sweep_values(const SweepSpec& spec);

/// Every game along the path is validated before any solve; a bad value
/// throws InputError. Steps are solved concurrently; rows come back in
/// parameter order.
SweepResult run_sweep(const FamilyGame& game, const SweepSpec& spec);

/// Columns: value, x_<s>_<t> (row-major), fitness_<i>, selfish_<i>,
/// totally_altruistic_<i>, converged. Numbers use 17 significant digits.
std::string sweep_to_csv(const FamilyGame& game, const SweepResult& result);

}  // namespace kinalloc
