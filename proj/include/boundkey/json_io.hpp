#pragma once

#include <string>

#include <json.hpp>

#include "boundkey/private_key.hpp"

namespace boundkey {

/// Matrix exchange format: { "dims": [...], "re": [[...]], "im": [[...]] },
/// dense row-major.
nlohmann::json operator_to_json(const MultipartiteOperator& m);
MultipartiteOperator operator_from_json(const nlohmann::json& j);

/// Private-state description: { "d", "shield_dims", "sigma", "unitaries",
/// "basis": { "alice", "bob" } }; matrices in the exchange format above.
nlohmann::json pdit_to_json(const PrivateState& p);
PrivateState pdit_from_json(const nlohmann::json& j);

/// { "p": [[...]], "eve_pairwise_max_distance", "secure", "dw_rate" }.
nlohmann::json ccq_report_json(const CcqState& c, double secure_tolerance);

void write_text_file(const std::string& path, const std::string& contents);
nlohmann::json read_json_file(const std::string& path);

}  // namespace boundkey
