#include "ontopure/diff.hpp"

#include <algorithm>

#include "ontopure/error.hpp"

namespace ontopure {

std::string_view kind_name(MismatchKind kind) noexcept {
    switch (kind) {
        case MismatchKind::Missing: return "Missing";
        case MismatchKind::Extra: return "Extra";
        case MismatchKind::LabelChanged: return "LabelChanged";
        case MismatchKind::Moved: return "Moved";
        case MismatchKind::PropertyChanged: return "PropertyChanged";
    }
    return "Unknown";
}

std::optional<MismatchKind> kind_from_name(std::string_view name) noexcept {
    for (auto k : {MismatchKind::Missing, MismatchKind::Extra, MismatchKind::LabelChanged, MismatchKind::Moved,
                   MismatchKind::PropertyChanged}) {
        if (kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view relation_name(VersionRelation relation) noexcept {
    switch (relation) {
        case VersionRelation::Identical: return "Identical";
        case VersionRelation::BackwardCompatible: return "BackwardCompatible";
        case VersionRelation::Incompatible: return "Incompatible";
        case VersionRelation::Unrelated: return "Unrelated";
    }
    return "Unknown";
}

VersionRelation compare_versions(const Ontology& local, const Ontology& reference) {
    const auto& mine = local.version.version;
    const auto& ref = reference.version;
    if (mine == ref.version) return VersionRelation::Identical;
    auto lists = [&](const std::vector<std::string>& v) { return std::find(v.begin(), v.end(), mine) != v.end(); };
    if (lists(ref.backward_compatible_with)) return VersionRelation::BackwardCompatible;
    if (lists(ref.incompatible_with)) return VersionRelation::Incompatible;
    return VersionRelation::Unrelated;
}

Rational mismatching_index(std::uint64_t mismatched, std::uint64_t total) {
    if (total == 0) throw OntologyError(ErrorCode::ZeroTotal, "mismatching index needs at least one node");
    if (mismatched > total)
        throw OntologyError(ErrorCode::InvalidArgument,
                            "M=" + std::to_string(mismatched) + " exceeds N=" + std::to_string(total));
    return Rational(static_cast<std::int64_t>(mismatched), static_cast<std::int64_t>(total));
}

MismatchReport find_mismatches(const Ontology& local, const Ontology& reference) {
    if (compare_versions(local, reference) == VersionRelation::Incompatible)
        throw OntologyError(ErrorCode::IncompatibleVersions, "reference " + reference.version.version +
                                                                 " is incompatible with local " +
                                                                 local.version.version);

    MismatchReport report;
    auto li = local.nodes.begin();
    auto ri = reference.nodes.begin();
    // Both indexes are ordered by ID, so a merge walk visits the union in ascending order.
    while (li != local.nodes.end() || ri != reference.nodes.end()) {
        ++report.total;
        Mismatch m;
        if (ri == reference.nodes.end() || (li != local.nodes.end() && li->first < ri->first)) {
            m.id = li->first;
            m.kinds.insert(MismatchKind::Extra);
            m.local_state = li->second;
            ++li;
        } else if (li == local.nodes.end() || ri->first < li->first) {
            m.id = ri->first;
            m.kinds.insert(MismatchKind::Missing);
            m.reference_state = ri->second;
            ++ri;
        } else {
            const auto& a = li->second;
            const auto& b = ri->second;
            m.id = li->first;
            if (a.label != b.label) m.kinds.insert(MismatchKind::LabelChanged);
            if (a.parent != b.parent) m.kinds.insert(MismatchKind::Moved);
            if (a.properties != b.properties || a.synonyms != b.synonyms) m.kinds.insert(MismatchKind::PropertyChanged);
            if (!m.kinds.empty()) {
                m.local_state = a;
                m.reference_state = b;
            }
            ++li;
            ++ri;
        }
        if (!m.kinds.empty()) report.mismatches.push_back(std::move(m));
    }
    report.mismatched = report.mismatches.size();
    report.index = report.total == 0 ? Rational{} : mismatching_index(report.mismatched, report.total);
    return report;
}

}  // namespace ontopure
