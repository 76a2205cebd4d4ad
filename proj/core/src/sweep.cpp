#include "kinalloc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "kinalloc/io.hpp"

namespace kinalloc {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t lookup(const FamilyGame& game, const std::string& id) {
  const auto& ids = game.individuals();
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw InputError("parameter path names unknown individual '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

ParameterPath parse_parameter_path(std::string_view text, const FamilyGame& game) {
  const auto parts = split(text, '/');
  ParameterPath path;
  if (parts[0] == "relatedness" && parts.size() == 3) {
    path.kind = ParameterPath::Kind::Relatedness;
    path.first = lookup(game, parts[1]);
    path.second = lookup(game, parts[2]);
    return path;
  }
  if (parts[0] == "budget" && parts.size() == 2) {
    path.kind = ParameterPath::Kind::Budget;
    path.first = lookup(game, parts[1]);
    return path;
  }
  if (parts[0] == "fitness" && parts.size() == 3) {
    path.first = lookup(game, parts[1]);
    if (parts[2] == "w") {
      path.kind = ParameterPath::Kind::FitnessWeight;
    } else if (parts[2] == "c") {
      path.kind = ParameterPath::Kind::FitnessScale;
    } else if (parts[2] == "p") {
      path.kind = ParameterPath::Kind::FitnessExponent;
    } else {
      throw InputError("fitness parameter must be w, c or p, got '" + parts[2] + "'");
    }
    return path;
  }
  throw InputError("malformed parameter path '" + std::string(text) +
                   "' (expected relatedness/<s>/<t>, budget/<id> or fitness/<id>/<w|c|p>)");
}

FamilyGame with_parameter(const FamilyGame& game, const ParameterPath& path, double value) {
  using Kind = ParameterPath::Kind;
  switch (path.kind) {
    case Kind::Relatedness: return game.with_relatedness(path.first, path.second, value);
    case Kind::Budget: return game.with_budget(path.first, value);
    default: break;
  }
  const FitnessFunction& f = game.fitness(path.first);
  double w = f.weight(), c = f.scale(), p = f.exponent();
  if (path.kind == Kind::FitnessWeight) w = value;
  if (path.kind == Kind::FitnessScale) c = value;
  if (path.kind == Kind::FitnessExponent) p = value;
  FitnessFunction g;
  switch (f.kind()) {
    case FitnessKind::Log: g = FitnessFunction::log(w, c); break;
    case FitnessKind::Power: g = FitnessFunction::power(w, c, p); break;
    case FitnessKind::SatExp: g = FitnessFunction::sat_exp(w, c); break;
    case FitnessKind::Linear: g = FitnessFunction::linear(w); break;
  }
  return game.with_fitness(path.first, g);
}

std::vector<double> sweep_values(const SweepSpec& spec) {
  if (spec.steps < 1) throw InputError("a sweep needs at least one step");
  std::vector<double> values(static_cast<std::size_t>(spec.steps));
  for (int k = 0; k < spec.steps; ++k) {
    values[k] = spec.steps == 1 ? spec.from
                                : spec.from + (spec.to - spec.from) * k / static_cast<double>(spec.steps - 1);
  }
  if (spec.steps > 1) values.back() = spec.to;
  return values;
}

SweepResult run_sweep(const FamilyGame& game, const SweepSpec& spec) {
  const auto values = sweep_values(spec);
  std::vector<FamilyGame> games;
  games.reserve(values.size());
  for (double v : values) {
    FamilyGame g = with_parameter(game, spec.parameter, v);
    const ValidationResult check = validate_game(g);
    if (!check.ok())
      throw InputError("sweep value " + format_double(v) + " gives an invalid game: " + check.to_string());
    games.push_back(std::move(g));
  }

  SweepResult result;
  result.rows.resize(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      result.rows[k].value = values[k];
      result.rows[k].report = solve_nash(games[k], spec.options);
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, values.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& row : result.rows)
    if (!row.report.diagnostics.converged) ++result.unconverged;
  return result;
}

std::string sweep_to_csv(const FamilyGame& game, const SweepResult& result) {
  const std::size_t n = game.size();
  const auto& ids = game.individuals();
  std::ostringstream out;
  out << "value";
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) out << ',' << csv_field("x_" + ids[s] + "_" + ids[t]);
  for (std::size_t i = 0; i < n; ++i) out << ',' << csv_field("fitness_" + ids[i]);
  for (std::size_t i = 0; i < n; ++i) out << ',' << csv_field("selfish_" + ids[i]);
  for (std::size_t i = 0; i < n; ++i) out << ',' << csv_field("totally_altruistic_" + ids[i]);
  out << ",converged\n";

  for (const auto& row : result.rows) {
    const auto& rep = row.report;
    const auto& c = rep.classification;
    auto member = [](const std::vector<std::size_t>& set, std::size_t i) {
      return std::find(set.begin(), set.end(), i) != set.end() ? 1 : 0;
    };
    out << format_double(row.value);
    for (double v : rep.profile.data()) out << ',' << format_double(v);
    for (double v : rep.inclusive_fitness) out << ',' << format_double(v);
    for (std::size_t i = 0; i < n; ++i) out << ',' << member(c.selfish, i);
    for (std::size_t i = 0; i < n; ++i) out << ',' << member(c.totally_altruistic, i);
    out << ',' << (rep.diagnostics.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace kinalloc
