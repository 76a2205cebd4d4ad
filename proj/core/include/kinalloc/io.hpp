#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "kinalloc/equilibrium.hpp"
#include "kinalloc/family_model.hpp"
#include "kinalloc/oracle.hpp"
#include "kinalloc/pedigree.hpp"

namespace kinalloc {

/// Malformed or invalid input documents. The message carries line context
/// for syntax errors and names the offending individual otherwise.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Game document:
///
///   {
///     "individuals": [
///       {"id": "parent", "budget": 3, "fitness": {"kind": "log", "w": 1, "c": 1}},
///       ...
///     ],
///     "relatedness": [[1, 0.5], [0.5, 1]]          // rows/cols in individual order
///   }
///
/// "relatedness" may instead be {"from_pedigree": "family.ped.json"} (path
/// relative to base_dir) or {"pedigree": [...]} with the pedigree inline.
FamilyGame parse_game_config(std::string_view document,
                             const std::filesystem::path& base_dir = {});
FamilyGame load_game_config(const std::filesystem::path& path);

nlohmann::json game_to_json(const FamilyGame& game);
std::string emit_game_config(const FamilyGame& game);

/// {"individuals": [{"id": "a", "mother": "m", "father": "f"}, ...]} or a
/// bare array of members.
Pedigree parse_pedigree(std::string_view document);
Pedigree load_pedigree(const std::filesystem::path& path);
nlohmann::json relatedness_to_json(const std::vector<std::string>& ids, const Matrix& r);

/// Accepts {"profile": [[...]]} (which includes report documents) or a bare
/// matrix. When the document lists "individuals" they must match the game.
AllocationProfile parse_profile(std::string_view document, const FamilyGame& game);
AllocationProfile load_profile(const std::filesystem::path& path, const FamilyGame& game);

nlohmann::json certificate_to_json(const KktCertificate& cert);
nlohmann::json classification_to_json(const FamilyGame& game, const Classification& c);
nlohmann::json report_to_json(const FamilyGame& game, const EquilibriumReport& report);
nlohmann::json properties_to_json(const FamilyGame& game, const PropertyReport& props);
nlohmann::json nash_check_to_json(const FamilyGame& game, const GridNashCheck& check,
                                  const GridSpec& spec);

/// Pretty-printed JSON followed by a newline.
std::string dump(const nlohmann::json& doc);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace kinalloc
