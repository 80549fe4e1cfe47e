#include <doctest.h>

#include "ontopure/diff.hpp"
#include "ontopure/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ontopure;
using ontopure::testing::Rng;

namespace {

// Root with two children, each with two leaves: 7 nodes.
Ontology seven() {
    Ontology o = make_ontology("theatre", "Theatre");
    const NodeId drama = insert_node(o, *o.root, "Drama");
    const NodeId venue = insert_node(o, *o.root, "Venue");
    insert_node(o, drama, "Tragedy");
    insert_node(o, drama, "Comedy");
    insert_node(o, venue, "Arena");
    insert_node(o, venue, "Black Box");
    return o;
}

std::set<std::string> kind_names(const Mismatch& m) {
    std::set<std::string> out;
    for (auto k : m.kinds) out.emplace(kind_name(k));
    return out;
}

void check_against_oracle(const Ontology& local, const Ontology& reference) {
    const auto report = find_mismatches(local, reference);
    const auto oracle = ontopure::testing::oracle_diff(local, reference);
    REQUIRE(report.mismatched == oracle.m);
    REQUIRE(report.total == oracle.n);
    CHECK(report.index == Rational(oracle.mi_num, oracle.mi_den));
    REQUIRE(report.mismatches.size() == oracle.kinds.size());
    auto it = oracle.kinds.begin();
    for (const auto& m : report.mismatches) {
        CHECK(m.id.value == it->first);
        CHECK(kind_names(m) == it->second);
        ++it;
    }
}

}  // namespace

TEST_CASE("compare_versions") {
    Ontology local = seven();
    Ontology ref = seven();
    CHECK(compare_versions(local, ref) == VersionRelation::Identical);

    ref.version.version = "1.1";
    ref.version.backward_compatible_with = {"1.0"};
    CHECK(compare_versions(local, ref) == VersionRelation::BackwardCompatible);

    local.version.version = "0.9";
    ref.version.incompatible_with = {"0.9"};
    CHECK(compare_versions(local, ref) == VersionRelation::Incompatible);

    local.version.version = "0.5";
    CHECK(compare_versions(local, ref) == VersionRelation::Unrelated);
}

TEST_CASE("find_mismatches on the worked examples") {
    const Ontology ref = seven();

    SUBCASE("deep copy") {
        const auto r = find_mismatches(ref, ref);
        CHECK(r.mismatched == 0);
        CHECK(r.total == 7);
        CHECK(r.index.is_zero());
        CHECK(r.mismatches.empty());
    }
    SUBCASE("one leaf missing") {
        Ontology local = ref;
        delete_node(local, NodeId{7}, DeletePolicy::Subtree);
        const auto r = find_mismatches(local, ref);
        CHECK(r.mismatched == 1);
        CHECK(r.total == 7);
        CHECK(r.index == Rational(1, 7));
        REQUIRE(r.mismatches.size() == 1);
        CHECK(r.mismatches[0].kinds == std::set{MismatchKind::Missing});
        CHECK_FALSE(r.mismatches[0].local_state.has_value());
        CHECK(r.mismatches[0].reference_state->label == "Black Box");
        check_against_oracle(local, ref);
    }
    SUBCASE("one label edited") {
        Ontology local = ref;
        NodeEdit e;
        e.label = "Farce";
        modify_node(local, NodeId{5}, e);
        const auto r = find_mismatches(local, ref);
        CHECK(r.mismatched == 1);
        REQUIRE(r.mismatches.size() == 1);
        CHECK(r.mismatches[0].kinds == std::set{MismatchKind::LabelChanged});
        check_against_oracle(local, ref);
    }
    SUBCASE("extra node grows N") {
        Ontology local = ref;
        insert_node(local, NodeId{2}, "Mime");
        const auto r = find_mismatches(local, ref);
        CHECK(r.total == 8);
        CHECK(r.mismatches.at(0).kinds == std::set{MismatchKind::Extra});
        CHECK_FALSE(r.mismatches.at(0).reference_state.has_value());
    }
    SUBCASE("several kinds on one node") {
        Ontology local = ref;
        move_node(local, NodeId{4}, NodeId{3});
        NodeEdit e;
        e.label = "Old Tragedy";
        e.synonyms = Synonyms{"Greek"};
        modify_node(local, NodeId{4}, e);
        const auto r = find_mismatches(local, ref);
        REQUIRE(r.mismatches.size() == 1);
        CHECK(r.mismatches[0].kinds ==
              std::set{MismatchKind::LabelChanged, MismatchKind::Moved, MismatchKind::PropertyChanged});
    }
    SUBCASE("incompatible versions refuse to diff") {
        Ontology newer = ref;
        newer.version.version = "2.0";
        newer.version.incompatible_with = {"1.0"};
        CHECK_THROWS_AS(find_mismatches(ref, newer), OntologyError);
        try {
            find_mismatches(ref, newer);
        } catch (const OntologyError& e) {
            CHECK(e.code() == ErrorCode::IncompatibleVersions);
        }
    }
}

TEST_CASE("version headers alone do not count as node mismatches") {
    const Ontology ref = seven();
    Ontology local = ref;
    local.version.version = "0.9";
    CHECK(find_mismatches(local, ref).mismatched == 0);
}

TEST_CASE("mismatching_index is exact") {
    CHECK(mismatching_index(0, 10).is_zero());
    CHECK(mismatching_index(2, 7) == Rational(2, 7));
    CHECK(mismatching_index(2, 7).to_string() == "2/7");
    CHECK(mismatching_index(9, 9) == Rational(1));
    CHECK(mismatching_index(1, 3) * Rational(3) == Rational(1));
    CHECK_THROWS_AS(mismatching_index(0, 0), OntologyError);
    CHECK_THROWS_AS(mismatching_index(4, 3), OntologyError);
    try {
        mismatching_index(1, 0);
    } catch (const OntologyError& e) {
        CHECK(e.code() == ErrorCode::ZeroTotal);
    }
}

TEST_CASE("property: diff matches the oracle, is symmetric, and is zero on itself") {
    Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const Ontology base = ontopure::testing::random_ontology(rng, 1 + rng() % 100);
        Ontology a = base;
        Ontology b = base;
        ontopure::testing::random_edits(a, rng, rng() % 12);
        ontopure::testing::random_edits(b, rng, rng() % 12);

        check_against_oracle(a, b);
        CHECK(find_mismatches(a, a).index.is_zero());

        const auto ab = find_mismatches(a, b);
        const auto ba = find_mismatches(b, a);
        CHECK(ab.mismatched == ba.mismatched);
        CHECK(ab.total == ba.total);
        REQUIRE(ab.mismatches.size() == ba.mismatches.size());
        for (std::size_t i = 0; i < ab.mismatches.size(); ++i) {
            auto flipped = ba.mismatches[i].kinds;
            if (flipped.erase(MismatchKind::Missing)) flipped.insert(MismatchKind::Extra);
            else if (flipped.erase(MismatchKind::Extra)) flipped.insert(MismatchKind::Missing);
            CHECK(ab.mismatches[i].kinds == flipped);
        }
        CHECK(ab.index <= Rational(1));
        CHECK(ab.index.is_zero() == ab.mismatches.empty());
        for (const auto& m : ab.mismatches) {
            CHECK_FALSE(m.kinds.empty());
            if (m.has(MismatchKind::Missing) || m.has(MismatchKind::Extra)) CHECK(m.kinds.size() == 1);
        }
    }
}
