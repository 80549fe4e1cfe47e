#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ontopure/ontology.hpp"

namespace ontopure {

// A synthetic web page about one concept. The text names the topic by label
// or synonym, mixed with a few ancestor labels and filler words.
struct BenchPage {
    NodeId topic;
    std::string text;
};

struct BenchQuery {
    std::string text;
    std::optional<NodeId> truth;  // concept the query is about, if any
};

struct BenchRecord {
    std::string engine;  // "ontology" or "keyword"
    std::int64_t elapsed_ms = 0;
    std::uint64_t perfect_pages = 0;  // cumulative
};

struct BenchConfig {
    std::size_t pages = 1000;
    std::size_t queries = 50;
    std::uint64_t seed = 42;
    // When non-empty, these labels are queried instead of drawing `queries` at random.
    std::vector<std::string> fixed_queries;
};

struct BenchRun {
    std::vector<BenchPage> corpus;
    std::vector<BenchQuery> queries;
    std::vector<BenchRecord> records;  // ontology rows first, one per query per engine
    std::uint64_t ontology_perfect = 0;
    std::uint64_t keyword_perfect = 0;
};

std::vector<BenchPage> generate_corpus(const Ontology& ontology, std::size_t pages, std::uint64_t seed);

// Ontology engine: the query's best-matching concept, then every page tagged
// with it or a descendant. Keyword engine: case-insensitive substring scan of
// page text. A retrieved page is perfect when its topic lies under the
// queried concept.
BenchRun run_bench(const Ontology& ontology, const BenchConfig& config);

// "engine,elapsed_ms,perfect_pages" header plus one row per record.
std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace ontopure
