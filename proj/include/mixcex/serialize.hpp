#pragma once

#include <string>

#include "json.hpp"
#include "mixcex/counterexample.hpp"

namespace mixcex {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

// Canonical document for a full instance.  Rationals are strings "p/q", big
// integers decimal strings; keys emit sorted, so dumping is byte-stable and
// parse-then-emit is the identity on emitted documents.
nlohmann::json instance_to_json(const Instance& inst);

// Reconstructs the instance by re-running the documented construction from
// the stored parameters and then requiring the stored intervals and schedule
// to match exactly; a file that disagrees with its own parameters is
// rejected with io_error.
Instance instance_from_json(const nlohmann::json& doc);

std::string canonical_dump(const nlohmann::json& doc);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

// Report fragments used by the CLI.
nlohmann::json eval_to_json(const Eval& e);
nlohmann::json witness_to_json(const Witness& w);
nlohmann::json probe_to_json(const std::vector<QuotientProbeRow>& rows);
nlohmann::json tail_certificate_to_json(const TailCertificate& t);

}  // namespace mixcex
