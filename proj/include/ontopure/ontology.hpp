#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ontopure {

// Stable identity of a concept. Positive, unique within one ontology, never
// reused after deletion. Ordered, so the node index doubles as the ID search tree.
struct NodeId {
    std::uint64_t value = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::uint64_t v) : value(v) {}

    constexpr bool valid() const { return value >= 1; }
    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

using Synonyms = std::set<std::string>;
using Properties = std::map<std::string, std::string>;

struct OntologyNode {
    NodeId id;
    std::string label;
    Synonyms synonyms;
    std::optional<NodeId> parent;  // absent only for the root
    std::vector<NodeId> children;  // ordered
    Properties properties;

    friend bool operator==(const OntologyNode&, const OntologyNode&) = default;
};

// owl:versionInfo plus the compatibility annotations of the ontology header.
struct VersionHeader {
    std::string version = "1.0";
    std::vector<std::string> backward_compatible_with;
    std::vector<std::string> incompatible_with;
    std::optional<std::string> prior_version;

    friend bool operator==(const VersionHeader&, const VersionHeader&) = default;
};

// Throws InvalidVersionHeader when a version is listed as both compatible and
// incompatible, or when the header lists its own version.
void check_version_header(const VersionHeader& header);

enum class DeletePolicy { Subtree, ReparentChildren };

// Field deltas for modify_node; absent members are left untouched.
struct NodeEdit {
    std::optional<std::string> label;
    std::optional<Synonyms> synonyms;
    std::optional<Properties> properties;

    bool empty() const { return !label && !synonyms && !properties; }
    friend bool operator==(const NodeEdit&, const NodeEdit&) = default;
};

// A single-rooted n-ary labeled tree. The members are plain data so loaders
// can assemble a tree before checking it; the free functions below keep a
// valid ontology valid.
struct Ontology {
    std::string domain;
    VersionHeader version;
    std::optional<NodeId> root;
    std::map<NodeId, OntologyNode> nodes;
    NodeId next_id{1};

    bool empty() const { return nodes.empty(); }
};

// Creates an ontology holding only a root concept (id 1).
Ontology make_ontology(std::string domain, std::string root_label, VersionHeader version = {});

// 1 + sum of the children's counts, starting at the root. 0 for an empty ontology.
std::size_t count_nodes(const Ontology& ontology);

const OntologyNode* find_node(const Ontology& ontology, NodeId id);

NodeId insert_node(Ontology& ontology, NodeId parent, std::string label, Synonyms synonyms = {},
                   Properties properties = {});

// Returns removed IDs in preorder of the removed subtree (just `id` for ReparentChildren).
std::vector<NodeId> delete_node(Ontology& ontology, NodeId id, DeletePolicy policy);

const OntologyNode& modify_node(Ontology& ontology, NodeId id, const NodeEdit& edit);

// Re-attaches `id` at the end of `new_parent`'s children. Rejects moving the
// root or moving a node under its own subtree (InvalidMove).
void move_node(Ontology& ontology, NodeId id, NodeId new_parent);

// True when `id` is `ancestor` or lies below it.
bool in_subtree(const Ontology& ontology, NodeId ancestor, NodeId id);

// Preorder walk from the root following children lists.
void for_each_preorder(const Ontology& ontology, const std::function<void(const OntologyNode&)>& visit);
void for_each_preorder(const Ontology& ontology, NodeId start,
                       const std::function<void(const OntologyNode&)>& visit);

// Root-to-node label path.
std::vector<std::string> label_path(const Ontology& ontology, NodeId id);

// Child with exactly this label, if any.
const OntologyNode* find_child_by_label(const Ontology& ontology, NodeId parent, std::string_view label);

enum class ViolationKind {
    InvalidId,
    KeyMismatch,
    EmptyLabel,
    MissingRoot,
    RootHasParent,
    MultipleRoots,
    DanglingParent,
    DanglingChild,
    ParentChildInconsistency,
    DuplicateChild,
    Cycle,
    DuplicateSiblingLabel,
    StaleNextId,
};

std::string_view violation_name(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    NodeId id;
    std::string detail;
};

// Every broken invariant, not just the first. Empty means valid.
std::vector<Violation> validate(const Ontology& ontology);

// Sibling order is not part of the canonical form. Everything else is compared:
// header fields plus every node record keyed by ID.
bool canonically_equal(const Ontology& a, const Ontology& b);

}  // namespace ontopure
