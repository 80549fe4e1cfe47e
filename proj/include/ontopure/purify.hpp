#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ontopure/diff.hpp"
#include "ontopure/ontology.hpp"

namespace ontopure {

// Re-creates `node` (its recorded ID included) as the last child of `parent`.
// `parent` is absent only when adding the root of an empty ontology.
struct AddOp {
    std::optional<NodeId> parent;
    OntologyNode node;  // children are ignored
};

struct DeleteOp {
    NodeId id;
    DeletePolicy policy = DeletePolicy::Subtree;
};

struct ModifyOp {
    NodeId id;
    NodeEdit edit;
};

struct MoveOp {
    NodeId id;
    NodeId new_parent;
};

// Adopts the reference's domain and version header once the nodes agree.
struct SetHeaderOp {
    std::string domain;
    VersionHeader version;
};

using PatchAction = std::variant<AddOp, DeleteOp, ModifyOp, MoveOp, SetHeaderOp>;

struct PatchOp {
    std::uint64_t seq = 0;  // consecutive from 1 within one purification run
    PatchAction action;
};

std::string_view op_name(const PatchAction& action) noexcept;

// Applies one op to a copy and returns it. Throws InapplicablePatch naming the
// violated precondition; the input is never modified.
Ontology apply_patch(const Ontology& ontology, const PatchOp& op);

// In-place variant; on failure the ontology is left unchanged.
void apply_patch_in_place(Ontology& ontology, const PatchOp& op);

struct PurifyResult {
    Ontology purified;
    std::vector<PatchOp> log;
    MismatchReport initial;
    MismatchReport final_report;
    std::size_t iterations = 0;  // repair rounds run before mi reached 0
};

// Repairs a copy of `local` until it has no mismatch against `reference`.
// Throws IncompatibleVersions, RootMismatch when the two versions are rooted at
// different IDs, and NonConvergence if a repair round fails to lower M (a bug).
PurifyResult purify(const Ontology& local, const Ontology& reference);

// Orders every node's children by the reference's child order. Sibling order is
// outside the canonical form, so this is not a logged patch.
void order_children_like(Ontology& ontology, const Ontology& reference);

}  // namespace ontopure
