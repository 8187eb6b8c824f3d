#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mmlab/covering.hpp"
#include "mmlab/covering_graph.hpp"
#include "mmlab/growth.hpp"
#include "mmlab/heat.hpp"
#include "mmlab/inequalities.hpp"

namespace mmlab {

// Report serialization. Keys are sorted by the JSON library, and floats
// print with round-trip precision, so identical inputs give byte-identical
// files.

nlohmann::json to_json(const GrowthReport& rep);
nlohmann::json to_json(const ReverseDoublingCheck& chk);
nlohmann::json to_json(const GoodCovering& cov);

/// Inverse of to_json(GoodCovering): reruns of a serialized covering (for
/// reproducibility) restore the exact piece structure.
GoodCovering covering_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CoveringValidation& val);
nlohmann::json to_json(const CoveringGraph& graph);
nlohmann::json to_json(const PoincareResult& res);
nlohmann::json to_json(const IsoperimetricResult& res);
nlohmann::json to_json(const StructureReport& rep);
nlohmann::json to_json(const LocalNeumannConstants& rep);
nlohmann::json to_json(const VerificationReport& rep);
nlohmann::json to_json(const HeatDecayCurve& curve);

/// 64-bit FNV-1a of a canonical string; stamps configs into reports.
std::string fnv1a_hex(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_csv_file(const std::string& path, const std::string& header,
                    const std::vector<std::vector<double>>& rows);

}  // namespace mmlab
