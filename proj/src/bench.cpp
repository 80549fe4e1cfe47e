#include "ontopure/bench.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <random>
#include <string_view>

#include "ontopure/error.hpp"
#include "ontopure/search.hpp"

namespace ontopure {

namespace {

constexpr std::array<std::string_view, 24> kFiller = {
    "review",  "tickets", "evening", "season",  "city",    "audience", "critic",  "premiere",
    "booking", "venue",   "night",   "company", "program", "festival", "tour",    "interview",
    "photos",  "news",    "local",   "weekend", "guide",   "history",  "feature", "archive"};

// Probability that a page also names one of its topic's ancestors.
constexpr double kAncestorMention = 0.3;
// Probability that a page names its topic by a synonym when it has one.
constexpr double kSynonymMention = 0.5;
// Probability that a page drops in an unrelated concept's label.
constexpr double kStrayMention = 0.2;

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<NodeId> all_ids(const Ontology& o) {
    std::vector<NodeId> ids;
    ids.reserve(o.nodes.size());
    for (const auto& [id, node] : o.nodes) ids.push_back(id);
    return ids;
}

std::vector<BenchQuery> draw_queries(const Ontology& o, const BenchConfig& config) {
    std::vector<BenchQuery> out;
    if (!config.fixed_queries.empty()) {
        for (const auto& q : config.fixed_queries) {
            BenchQuery bq{q, std::nullopt};
            for (const auto& [id, node] : o.nodes) {
                if (node.label == q) {
                    bq.truth = id;
                    break;
                }
            }
            out.push_back(std::move(bq));
        }
        return out;
    }
    const auto ids = all_ids(o);
    std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    for (std::size_t i = 0; i < config.queries; ++i) {
        const NodeId id = ids[pick(rng)];
        out.push_back({o.nodes.at(id).label, id});
    }
    return out;
}

bool perfect(const Ontology& o, const BenchQuery& q, const BenchPage& page) {
    return q.truth && in_subtree(o, *q.truth, page.topic);
}

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

}  // namespace

std::vector<BenchPage> generate_corpus(const Ontology& o, std::size_t pages, std::uint64_t seed) {
    std::vector<BenchPage> corpus;
    if (o.empty()) return corpus;
    const auto ids = all_ids(o);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    std::uniform_int_distribution<std::size_t> filler(0, kFiller.size() - 1);
    std::uniform_int_distribution<int> filler_count(6, 12);
    std::bernoulli_distribution ancestor(kAncestorMention);
    std::bernoulli_distribution synonym(kSynonymMention);
    std::bernoulli_distribution stray(kStrayMention);

    corpus.reserve(pages);
    for (std::size_t i = 0; i < pages; ++i) {
        const auto& node = o.nodes.at(ids[pick(rng)]);
        std::vector<std::string> words;

        std::string name = node.label;
        if (!node.synonyms.empty() && synonym(rng)) {
            std::uniform_int_distribution<std::size_t> which(0, node.synonyms.size() - 1);
            name = *std::next(node.synonyms.begin(), static_cast<std::ptrdiff_t>(which(rng)));
        }
        words.push_back(std::move(name));
        for (auto p = node.parent; p; p = o.nodes.at(*p).parent) {
            if (ancestor(rng)) words.push_back(o.nodes.at(*p).label);
        }
        if (stray(rng)) words.push_back(o.nodes.at(ids[pick(rng)]).label);
        const int n = filler_count(rng);
        for (int k = 0; k < n; ++k) words.emplace_back(kFiller[filler(rng)]);
        std::shuffle(words.begin(), words.end(), rng);

        std::string text;
        for (const auto& w : words) {
            if (!text.empty()) text += ' ';
            text += w;
        }
        corpus.push_back({node.id, std::move(text)});
    }
    return corpus;
}

BenchRun run_bench(const Ontology& o, const BenchConfig& config) {
    if (o.empty()) throw OntologyError(ErrorCode::InvalidArgument, "cannot benchmark an empty ontology");
    if (config.pages == 0 || (config.queries == 0 && config.fixed_queries.empty()))
        throw OntologyError(ErrorCode::InvalidArgument, "pages and queries must be at least 1");

    BenchRun run;
    run.corpus = generate_corpus(o, config.pages, config.seed);
    run.queries = draw_queries(o, config);

    // Ontology-guided retrieval by concept subsumption.
    auto start = Clock::now();
    for (const auto& q : run.queries) {
        const auto tokens = split_tokens(q.text);
        if (!tokens.empty()) {
            const auto outcome = search(o, nullptr, Query{q.text, o.domain, tokens});
            if (const auto* hits = std::get_if<Hits>(&outcome)) {
                const NodeId concept_id = hits->results.front().id;
                for (const auto& page : run.corpus) {
                    if (in_subtree(o, concept_id, page.topic) && perfect(o, q, page)) ++run.ontology_perfect;
                }
            }
        }
        run.records.push_back({"ontology", ms_since(start), run.ontology_perfect});
    }

    // Keyword baseline.
    std::vector<std::string> lowered;
    lowered.reserve(run.corpus.size());
    for (const auto& page : run.corpus) lowered.push_back(lower(page.text));
    start = Clock::now();
    for (const auto& q : run.queries) {
        const std::string needle = lower(q.text);
        for (std::size_t i = 0; i < run.corpus.size(); ++i) {
            if (!needle.empty() && lowered[i].find(needle) != std::string::npos && perfect(o, q, run.corpus[i]))
                ++run.keyword_perfect;
        }
        run.records.push_back({"keyword", ms_since(start), run.keyword_perfect});
    }
    return run;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
    std::string out = "engine,elapsed_ms,perfect_pages\n";
    for (const auto& r : records) {
        out += r.engine + "," + std::to_string(r.elapsed_ms) + "," + std::to_string(r.perfect_pages) + "\n";
    }
    return out;
}

}  // namespace ontopure
