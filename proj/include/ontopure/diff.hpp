#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "ontopure/ontology.hpp"
#include "ontopure/rational.hpp"

namespace ontopure {

enum class MismatchKind {
    Missing,          // present in the reference only
    Extra,            // present in the local copy only
    LabelChanged,
    Moved,            // different parent
    PropertyChanged,  // properties or synonyms differ
};

std::string_view kind_name(MismatchKind kind) noexcept;
std::optional<MismatchKind> kind_from_name(std::string_view name) noexcept;

struct Mismatch {
    NodeId id;
    std::set<MismatchKind> kinds;
    std::optional<OntologyNode> local_state;
    std::optional<OntologyNode> reference_state;

    bool has(MismatchKind k) const { return kinds.contains(k); }
};

struct MismatchReport {
    std::vector<Mismatch> mismatches;  // ascending id
    std::uint64_t mismatched = 0;      // M
    std::uint64_t total = 0;           // N, size of the union of both ID sets
    Rational index;                    // mi = M / N
};

enum class VersionRelation { Identical, BackwardCompatible, Incompatible, Unrelated };

std::string_view relation_name(VersionRelation relation) noexcept;

// How the reference's header positions itself relative to the local version.
VersionRelation compare_versions(const Ontology& local, const Ontology& reference);

// mi = M / N, exact. Throws ZeroTotal for N == 0 and InvalidArgument for M > N.
Rational mismatching_index(std::uint64_t mismatched, std::uint64_t total);

// Joins the two versions on node ID and classifies every difference. Throws
// IncompatibleVersions when the reference declares the local version
// incompatible: such a copy has to be replaced, not purified.
MismatchReport find_mismatches(const Ontology& local, const Ontology& reference);

}  // namespace ontopure
