#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ontopure/diff.hpp"
#include "ontopure/ontology.hpp"
#include "ontopure/rational.hpp"

namespace ontopure {

// Lowercased tokens split on anything that is not an ASCII letter or digit.
// Throws EmptyQuery when nothing survives.
std::vector<std::string> tokenize(std::string_view raw);

// Same split without the EmptyQuery check (labels and synonyms).
std::vector<std::string> split_tokens(std::string_view raw);

struct Query {
    std::string raw;
    std::string domain;
    std::vector<std::string> tokens;

    static Query parse(std::string raw, std::string domain);
};

struct SearchResult {
    NodeId id;
    std::vector<std::string> path;  // root label first
    Rational score;
    std::vector<NodeId> links;  // children, for crawling down
};

struct Hits {
    std::vector<SearchResult> results;  // score desc, then id asc; never empty
};
struct NoMatch {};
struct NeedsPurification {
    MismatchReport report;
};

using SearchOutcome = std::variant<Hits, NoMatch, NeedsPurification>;

std::string_view outcome_name(const SearchOutcome& outcome) noexcept;

// 1 per query token equal to a label/synonym token, 0.5 per remaining query
// token that is a prefix of one.
Rational match_node(const OntologyNode& node, const std::vector<std::string>& tokens);

// Scores every node of `local`. With no hit, a supplied reference that does
// answer the query turns the outcome into NeedsPurification. Throws
// DomainMismatch when the query targets another domain.
SearchOutcome search(const Ontology& local, const Ontology* reference, const Query& query);

}  // namespace ontopure
