#include "ontopure/search.hpp"

#include <algorithm>
#include <cctype>

#include "ontopure/error.hpp"

namespace ontopure {

std::vector<std::string> split_tokens(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : raw) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) != 0) {
            cur += static_cast<char>(std::tolower(u));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<std::string> tokenize(std::string_view raw) {
    auto tokens = split_tokens(raw);
    if (tokens.empty()) throw OntologyError(ErrorCode::EmptyQuery, "query has no searchable characters");
    return tokens;
}

Query Query::parse(std::string raw, std::string domain) {
    Query q;
    q.tokens = tokenize(raw);
    q.raw = std::move(raw);
    q.domain = std::move(domain);
    return q;
}

std::string_view outcome_name(const SearchOutcome& outcome) noexcept {
    switch (outcome.index()) {
        case 0: return "hits";
        case 1: return "noMatch";
        default: return "needsPurification";
    }
}

Rational match_node(const OntologyNode& node, const std::vector<std::string>& tokens) {
    std::vector<std::string> vocab = split_tokens(node.label);
    for (const auto& s : node.synonyms) {
        auto more = split_tokens(s);
        vocab.insert(vocab.end(), more.begin(), more.end());
    }
    std::int64_t exact = 0;
    std::int64_t prefix = 0;
    for (const auto& t : tokens) {
        if (std::find(vocab.begin(), vocab.end(), t) != vocab.end()) {
            ++exact;
        } else if (std::any_of(vocab.begin(), vocab.end(), [&](const std::string& v) { return v.starts_with(t); })) {
            ++prefix;
        }
    }
    return Rational(exact) + Rational(prefix, 2);
}

namespace {

std::vector<SearchResult> score_all(const Ontology& o, const std::vector<std::string>& tokens) {
    std::vector<SearchResult> hits;
    for (const auto& [id, node] : o.nodes) {
        Rational score = match_node(node, tokens);
        if (score.is_zero()) continue;
        hits.push_back({id, label_path(o, id), score, node.children});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const SearchResult& a, const SearchResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return hits;
}

}  // namespace

SearchOutcome search(const Ontology& local, const Ontology* reference, const Query& query) {
    if (query.domain != local.domain)
        throw OntologyError(ErrorCode::DomainMismatch,
                            "query domain '" + query.domain + "' but ontology domain '" + local.domain + "'");
    if (query.tokens.empty()) throw OntologyError(ErrorCode::EmptyQuery, "query has no tokens");

    auto hits = score_all(local, query.tokens);
    if (!hits.empty()) return Hits{std::move(hits)};
    if (reference != nullptr) {
        const bool reference_answers = std::any_of(reference->nodes.begin(), reference->nodes.end(), [&](const auto& e) {
            return !match_node(e.second, query.tokens).is_zero();
        });
        if (reference_answers) return NeedsPurification{find_mismatches(local, *reference)};
    }
    return NoMatch{};
}

}  // namespace ontopure
