#pragma once

// Canonical JSON renderings used on the wire and in persisted snapshots. Key order is fixed, so equal values dump to equal bytes.

#include <json.hpp>

#include <vector>

#include "ontopure/diff.hpp"
#include "ontopure/ontology.hpp"
#include "ontopure/purify.hpp"
#include "ontopure/search.hpp"

namespace ontopure {

using Json = nlohmann::ordered_json;

Json node_to_json(const OntologyNode& node);
OntologyNode node_from_json(const Json& j);

Json version_to_json(const VersionHeader& header);
VersionHeader version_from_json(const Json& j);

Json ontology_to_json(const Ontology& ontology);

// {"mismatches":[{"id","kinds","local","reference"}],"M","N","mi":"M/N","miDecimal"}
Json report_to_json(const MismatchReport& report);
MismatchReport report_from_json(const Json& j);

// [{"seq","op","args"}]
Json patch_to_json(const PatchOp& op);
PatchOp patch_from_json(const Json& j);
Json patch_log_to_json(const std::vector<PatchOp>& log);
std::vector<PatchOp> patch_log_from_json(const Json& j);

// {"outcome":"hits"|"noMatch"|"needsPurification","results":[...],"report":<report>|null}
Json outcome_to_json(const SearchOutcome& outcome);
SearchOutcome outcome_from_json(const Json& j);

std::string_view policy_name(DeletePolicy policy) noexcept;
std::optional<DeletePolicy> policy_from_name(std::string_view name) noexcept;

}  // namespace ontopure
