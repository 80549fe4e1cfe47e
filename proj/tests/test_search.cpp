#include <doctest.h>

#include "ontopure/diff.hpp"
#include "ontopure/error.hpp"
#include "ontopure/owl_io.hpp"
#include "ontopure/purify.hpp"
#include "ontopure/search.hpp"
#include "ontopure/wire.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ontopure;
using ontopure::testing::Rng;

namespace {

Ontology theatre() { return load_ontology(std::filesystem::path(ONTOPURE_SOURCE_DIR) / "data/theatre.owl"); }

OntologyNode node(std::string label, Synonyms syn = {}) {
    OntologyNode n;
    n.id = NodeId{1};
    n.label = std::move(label);
    n.synonyms = std::move(syn);
    return n;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const OntologyError& e) {
        return e.code();
    }
    FAIL("expected an OntologyError");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("tokenize") {
    CHECK(tokenize("Drama") == std::vector<std::string>{"drama"});
    CHECK(tokenize("stage-craft 2024") == std::vector<std::string>{"stage", "craft", "2024"});
    CHECK(tokenize("  Black   BOX!! ") == std::vector<std::string>{"black", "box"});
    CHECK(code_of([] { tokenize("!!!"); }) == ErrorCode::EmptyQuery);
    CHECK(code_of([] { tokenize(""); }) == ErrorCode::EmptyQuery);
}

TEST_CASE("match_node scoring") {
    CHECK(match_node(node("Drama"), {"drama"}) == Rational(1));
    CHECK(match_node(node("Dramatist"), {"drama"}) == Rational(1, 2));
    CHECK(match_node(node("Lighting"), {"sound"}).is_zero());
    CHECK(match_node(node("Stage Lighting"), {"stage", "light"}) == Rational(3, 2));
    CHECK(match_node(node("Playwright", {"Dramatist"}), {"dramatist"}) == Rational(1));
    // A token counts once even if it matches several label tokens.
    CHECK(match_node(node("Drama Drama"), {"drama"}) == Rational(1));
}

TEST_CASE("search over the theatre fixture") {
    const Ontology o = theatre();
    SUBCASE("root query ranks the root first") {
        const auto out = search(o, nullptr, Query::parse("theatre", "theatre"));
        REQUIRE(std::holds_alternative<Hits>(out));
        const auto& hits = std::get<Hits>(out).results;
        CHECK(hits.front().id == *o.root);
        CHECK(hits.front().path == std::vector<std::string>{"Theatre"});
        CHECK(hits.front().links == o.nodes.at(*o.root).children);
    }
    SUBCASE("synonyms are searchable") {
        const auto out = search(o, nullptr, Query::parse("Dramatist", "theatre"));
        REQUIRE(std::holds_alternative<Hits>(out));
        CHECK(std::get<Hits>(out).results.front().path == std::vector<std::string>{"Theatre", "People", "Playwright"});
    }
    SUBCASE("domain gate") {
        CHECK(code_of([&] { search(o, nullptr, Query::parse("opera", "music")); }) == ErrorCode::DomainMismatch);
    }
    SUBCASE("nothing anywhere") {
        CHECK(std::holds_alternative<NoMatch>(search(o, nullptr, Query::parse("zzz", "theatre"))));
        CHECK(std::holds_alternative<NoMatch>(search(o, &o, Query::parse("zzz", "theatre"))));
    }
}

TEST_CASE("a label only the reference has asks for purification") {
    const Ontology ref = theatre();
    Ontology local = ref;
    const NodeId kabuki{22};
    REQUIRE(ref.nodes.at(kabuki).label == "Kabuki");
    delete_node(local, kabuki, DeletePolicy::Subtree);

    const auto out = search(local, &ref, Query::parse("kabuki", "theatre"));
    REQUIRE(std::holds_alternative<NeedsPurification>(out));
    const auto& report = std::get<NeedsPurification>(out).report;
    CHECK(report.mismatched >= 1);
    const auto oracle = ontopure::testing::oracle_diff(local, ref);
    CHECK(report.mismatched == oracle.m);
    CHECK(report.total == oracle.n);

    const auto after = search(purify(local, ref).purified, &ref, Query::parse("kabuki", "theatre"));
    CHECK(std::holds_alternative<Hits>(after));
}

TEST_CASE("outcome JSON round-trips") {
    const Ontology o = theatre();
    for (const char* q : {"theatre stage", "zzz"}) {
        const auto out = search(o, nullptr, Query::parse(q, "theatre"));
        const Json j = outcome_to_json(out);
        CHECK(j["outcome"] == outcome_name(out));
        CHECK(outcome_to_json(outcome_from_json(j)) == j);
    }
}

TEST_CASE("property: ranking, paths, determinism and the purification fixpoint") {
    Rng rng(37);
    for (int trial = 0; trial < 150; ++trial) {
        const Ontology ref = ontopure::testing::random_ontology(rng, 1 + rng() % 80);
        Ontology local = ref;
        ontopure::testing::random_edits(local, rng, rng() % 10);
        const std::string q = ontopure::testing::random_word(rng) + (rng() % 2 ? " " + ontopure::testing::random_word(rng).substr(0, 3) : "");
        const Query query = Query::parse(q, "theatre");

        const auto out = search(local, &ref, query);
        CHECK(outcome_to_json(out) == outcome_to_json(search(local, &ref, query)));

        if (const auto* hits = std::get_if<Hits>(&out)) {
            REQUIRE_FALSE(hits->results.empty());
            for (std::size_t i = 0; i < hits->results.size(); ++i) {
                const auto& r = hits->results[i];
                CHECK(r.score > Rational(0));
                if (i > 0) {
                    const auto& prev = hits->results[i - 1];
                    CHECK((prev.score > r.score || (prev.score == r.score && prev.id < r.id)));
                }
                // Walk the path from the root by label.
                NodeId at = *local.root;
                CHECK(r.path.front() == local.nodes.at(at).label);
                for (std::size_t k = 1; k < r.path.size(); ++k) {
                    const auto* child = find_child_by_label(local, at, r.path[k]);
                    REQUIRE(child != nullptr);
                    at = child->id;
                }
                CHECK(at == r.id);
                CHECK(r.links == local.nodes.at(r.id).children);
            }
        } else if (std::holds_alternative<NeedsPurification>(out)) {
            const auto fixed = search(purify(local, ref).purified, &ref, query);
            CHECK_FALSE(std::holds_alternative<NeedsPurification>(fixed));
        }
    }
}
