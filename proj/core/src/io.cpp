#include "kinalloc/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kinalloc {

using nlohmann::json;

namespace {

// Non-finite values have no JSON literal; they are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (double v : m.row(r)) row.push_back(number(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json ids_to_json(const FamilyGame& game, const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (std::size_t i : idx) out.push_back(game.individuals()[i]);
  return out;
}

json parse_json(std::string_view document, std::string_view what) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, document.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (document[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "malformed " << what << " at line " << line << ", column " << column << ": " << e.what();
    throw InputError(msg.str());
  }
}

double read_number(const json& obj, const char* key, const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError(context + ": missing '" + key + "'");
  if (!it->is_number()) throw InputError(context + ": '" + key + "' must be a number");
  return it->get<double>();
}

Matrix read_matrix(const json& doc, std::size_t n, const std::string& what) {
  if (!doc.is_array() || doc.size() != n)
    throw InputError(what + " must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = doc[r];
    if (!row.is_array() || row.size() != n)
      throw InputError(what + " row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      if (!row[c].is_number())
        throw InputError(what + " entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not a number");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

FitnessFunction read_fitness(const json& obj, const std::string& context) {
  if (!obj.is_object()) throw InputError(context + ": 'fitness' must be an object");
  const auto kind_it = obj.find("kind");
  if (kind_it == obj.end() || !kind_it->is_string()) throw InputError(context + ": fitness needs a 'kind'");
  FitnessKind kind;
  try {
    kind = fitness_kind_from_string(kind_it->get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(context + ": " + e.what());
  }
  const double w = read_number(obj, "w", context);
  switch (kind) {
    case FitnessKind::Log: return FitnessFunction::log(w, read_number(obj, "c", context));
    case FitnessKind::SatExp: return FitnessFunction::sat_exp(w, read_number(obj, "c", context));
    case FitnessKind::Power:
      return FitnessFunction::power(w, read_number(obj, "c", context), read_number(obj, "p", context));
    case FitnessKind::Linear: return FitnessFunction::linear(w);
  }
  throw InputError(context + ": unsupported fitness kind");
}

json fitness_to_json(const FitnessFunction& f) {
  json out = {{"kind", std::string(to_string(f.kind()))}, {"w", f.weight()}};
  if (f.kind() != FitnessKind::Linear) out["c"] = f.scale();
  if (f.kind() == FitnessKind::Power) out["p"] = f.exponent();
  return out;
}

Pedigree pedigree_from_json(const json& doc) {
  const json* members = &doc;
  if (doc.is_object()) {
    const auto it = doc.find("individuals");
    if (it == doc.end()) throw InputError("pedigree document needs an 'individuals' list");
    members = &*it;
  }
  if (!members->is_array()) throw InputError("pedigree individuals must be a list");
  Pedigree ped;
  for (std::size_t k = 0; k < members->size(); ++k) {
    const json& m = (*members)[k];
    const std::string context = "pedigree entry " + std::to_string(k);
    if (!m.is_object() || !m.contains("id") || !m["id"].is_string())
      throw InputError(context + ": needs a string 'id'");
    PedigreeMember member{m["id"].get<std::string>(), std::nullopt, std::nullopt};
    for (const char* key : {"mother", "father"}) {
      const auto it = m.find(key);
      if (it == m.end() || it->is_null()) continue;
      if (!it->is_string()) throw InputError("pedigree member '" + member.id + "': '" + key + "' must be an id");
      (std::string_view(key) == "mother" ? member.mother : member.father) = it->get<std::string>();
    }
    ped.members.push_back(std::move(member));
  }
  try {
    validate_pedigree(ped);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("invalid pedigree: ") + e.what());
  }
  return ped;
}

Matrix relatedness_from_pedigree(const Pedigree& ped, const std::vector<std::string>& ids) {
  const Matrix full = pedigree_to_relatedness(ped);
  const auto ped_ids = ped.ids();
  std::vector<std::size_t> pos;
  for (const auto& id : ids) {
    const auto it = std::find(ped_ids.begin(), ped_ids.end(), id);
    if (it == ped_ids.end()) throw InputError("individual '" + id + "' does not appear in the pedigree");
    pos.push_back(static_cast<std::size_t>(it - ped_ids.begin()));
  }
  Matrix r(ids.size(), ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = 0; b < ids.size(); ++b) r(a, b) = full(pos[a], pos[b]);
  return r;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FamilyGame parse_game_config(std::string_view document, const std::filesystem::path& base_dir) {
  const json doc = parse_json(document, "game document");
  if (!doc.is_object()) throw InputError("game document must be an object");
  const auto ind_it = doc.find("individuals");
  if (ind_it == doc.end() || !ind_it->is_array() || ind_it->empty())
    throw InputError("game document needs a non-empty 'individuals' list");

  std::vector<std::string> ids;
  std::vector<double> budgets;
  std::vector<FitnessFunction> fitness;
  for (std::size_t k = 0; k < ind_it->size(); ++k) {
    const json& entry = (*ind_it)[k];
    std::string context = "individual #" + std::to_string(k);
    if (!entry.is_object()) throw InputError(context + ": must be an object");
    const auto id_it = entry.find("id");
    if (id_it == entry.end() || !id_it->is_string()) throw InputError(context + ": needs a string 'id'");
    const std::string id = id_it->get<std::string>();
    context = "individual '" + id + "'";
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) throw InputError(context + ": duplicate id");
    ids.push_back(id);
    budgets.push_back(read_number(entry, "budget", context));
    const auto fit_it = entry.find("fitness");
    if (fit_it == entry.end()) throw InputError(context + ": missing 'fitness'");
    fitness.push_back(read_fitness(*fit_it, context));
  }

  const std::size_t n = ids.size();
  const auto rel_it = doc.find("relatedness");
  if (rel_it == doc.end()) throw InputError("game document needs 'relatedness'");
  Matrix r;
  if (rel_it->is_array()) {
    r = read_matrix(*rel_it, n, "relatedness");
  } else if (rel_it->is_object() && rel_it->contains("from_pedigree")) {
    const json& path = (*rel_it)["from_pedigree"];
    if (!path.is_string()) throw InputError("'from_pedigree' must be a file path");
    r = relatedness_from_pedigree(load_pedigree(base_dir / path.get<std::string>()), ids);
  } else if (rel_it->is_object() && rel_it->contains("pedigree")) {
    r = relatedness_from_pedigree(pedigree_from_json((*rel_it)["pedigree"]), ids);
  } else {
    throw InputError("'relatedness' must be a matrix, {\"from_pedigree\": path} or {\"pedigree\": [...]}");
  }

  FamilyGame game(std::move(ids), std::move(budgets), std::move(r), std::move(fitness));
  const ValidationResult check = validate_game(game);
  if (!check.ok()) {
    std::ostringstream msg;
    msg << "invalid game:";
    for (const auto& v : check.violations) {
      msg << "\n  " << v.message;
      if (v.row) msg << " (" << game.individuals()[*v.row];
      if (v.row && v.column) msg << " -> " << game.individuals()[*v.column];
      if (v.row) msg << ")";
    }
    throw InputError(msg.str());
  }
  return game;
}

FamilyGame load_game_config(const std::filesystem::path& path) {
  return parse_game_config(read_text_file(path), path.parent_path());
}

json game_to_json(const FamilyGame& game) {
  json individuals = json::array();
  for (std::size_t i = 0; i < game.size(); ++i) {
    individuals.push_back({{"id", game.individuals()[i]},
                           {"budget", game.budget(i)},
                           {"fitness", fitness_to_json(game.fitness(i))}});
  }
  return {{"individuals", std::move(individuals)}, {"relatedness", matrix_to_json(game.relatedness())}};
}

std::string emit_game_config(const FamilyGame& game) { return dump(game_to_json(game)); }

Pedigree parse_pedigree(std::string_view document) {
  return pedigree_from_json(parse_json(document, "pedigree document"));
}

Pedigree load_pedigree(const std::filesystem::path& path) { return parse_pedigree(read_text_file(path)); }

json relatedness_to_json(const std::vector<std::string>& ids, const Matrix& r) {
  return {{"individuals", ids}, {"relatedness", matrix_to_json(r)}};
}

AllocationProfile parse_profile(std::string_view document, const FamilyGame& game) {
  const json doc = parse_json(document, "profile document");
  const json* matrix = &doc;
  if (doc.is_object()) {
    if (const auto it = doc.find("individuals"); it != doc.end()) {
      if (*it != json(game.individuals()))
        throw InputError("profile individuals do not match the game's individuals");
    }
    const auto it = doc.find("profile");
    if (it == doc.end()) throw InputError("profile document needs a 'profile' matrix");
    matrix = &*it;
  }
  AllocationProfile x = read_matrix(*matrix, game.size(), "profile");
  return x;
}

AllocationProfile load_profile(const std::filesystem::path& path, const FamilyGame& game) {
  return parse_profile(read_text_file(path), game);
}

json certificate_to_json(const KktCertificate& cert) {
  const auto& r = cert.residuals;
  return {{"certified", cert.certified},
          {"tolerance", cert.tolerance},
          {"lambda", vector_to_json(cert.lambda)},
          {"mu", matrix_to_json(cert.mu)},
          {"residuals",
           {{"stationarity", number(r.stationarity)},
            {"complementarity", number(r.complementarity)},
            {"budget", number(r.budget)},
            {"nonnegativity", number(r.nonnegativity)},
            {"mu_sign", number(r.mu_sign)}}}};
}

json classification_to_json(const FamilyGame& game, const Classification& c) {
  json beneficiaries = json::object();
  json argmax_adjusted = json::object();
  for (std::size_t s = 0; s < game.size(); ++s) {
    beneficiaries[game.individuals()[s]] = ids_to_json(game, c.beneficiaries[s]);
    argmax_adjusted[game.individuals()[s]] = ids_to_json(game, c.argmax_adjusted[s]);
  }
  return {{"beneficiaries", std::move(beneficiaries)},
          {"selfish", ids_to_json(game, c.selfish)},
          {"altruistic", ids_to_json(game, c.altruistic)},
          {"totally_altruistic", ids_to_json(game, c.totally_altruistic)},
          {"argmax_adjusted", std::move(argmax_adjusted)},
          {"argmax_plain", ids_to_json(game, c.argmax_plain)},
          {"support_tol", c.support_tol},
          {"argmax_tol", c.argmax_tol}};
}

json report_to_json(const FamilyGame& game, const EquilibriumReport& report) {
  const auto& d = report.diagnostics;
  return {{"individuals", game.individuals()},
          {"profile", matrix_to_json(report.profile)},
          {"incoming", vector_to_json(report.incoming)},
          {"inclusive_fitness", vector_to_json(report.inclusive_fitness)},
          {"certificate", certificate_to_json(report.certificate)},
          {"classification", classification_to_json(game, report.classification)},
          {"diagnostics",
           {{"mode", std::string(to_string(d.mode))},
            {"iterations", d.iterations},
            {"initial_damping", d.initial_damping},
            {"final_damping", d.final_damping},
            {"displacement", number(d.displacement)},
            {"degenerate_responses", d.degenerate_responses},
            {"converged", d.converged}}}};
}

json properties_to_json(const FamilyGame& game, const PropertyReport& props) {
  json witnesses = json::array();
  for (const auto& w : props.witnesses) {
    witnesses.push_back({{"source", game.individuals()[w.source]},
                         {"target", game.individuals()[w.target]},
                         {"detail", w.detail}});
  }
  json out = {{"beneficiaries_in_argmax_adjusted", std::string(to_string(props.beneficiaries_in_argmax))},
              {"argmax_plain_selfish", std::string(to_string(props.argmax_plain_selfish))},
              {"witnesses", std::move(witnesses)}};
  if (!props.hypothesis_note.empty()) out["hypothesis_note"] = props.hypothesis_note;
  return out;
}

json nash_check_to_json(const FamilyGame& game, const GridNashCheck& check, const GridSpec& spec) {
  json gains = json::object();
  for (std::size_t s = 0; s < game.size(); ++s) gains[game.individuals()[s]] = number(check.gains[s]);
  return {{"pass", check.pass},
          {"step", spec.step},
          {"epsilon", spec.epsilon},
          {"worst_gain", number(check.worst_gain)},
          {"worst_source", game.individuals()[check.worst_source]},
          {"deviation", vector_to_json(check.deviation)},
          {"gains", std::move(gains)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace kinalloc
