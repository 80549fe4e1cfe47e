// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "ontopure/bench.hpp"
#include "ontopure/cli.hpp"
#include "ontopure/diff.hpp"
#include "ontopure/owl_io.hpp"
#include "ontopure/purify.hpp"
#include "ontopure/service.hpp"
#include "ontopure/wire.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace ontopure;
using namespace ontopure::testing;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr int kPurifyPairs = 1000;
constexpr std::size_t kMaxReferenceNodes = 500;
constexpr std::size_t kMaxEdits = 50;
constexpr double kPurifyBudgetMs = 1000.0;
constexpr int kOraclePairs = 1000;
constexpr int kCountTrees = 1000;
constexpr int kRoundTrips = 500;
constexpr int kRywTrials = 100;
constexpr int kReaders = 16;
constexpr int kReplayTrials = 1000;
constexpr double kBenchRatio = 1.2;
constexpr double kBenchBudgetMs = 10000.0;

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("%s  %-22s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

struct Pair {
    Ontology reference;
    Ontology local;
};

Pair drifted_pair(Rng& rng) {
    Pair p;
    p.reference = random_ontology(rng, 1 + rng() % kMaxReferenceNodes);
    p.local = p.reference;
    random_edits(p.local, rng, rng() % (kMaxEdits + 1));
    return p;
}

void purify_convergence() {
    Rng rng(1001);
    int ok = 0;
    double worst_ms = 0;
    std::string first_failure;
    for (int i = 0; i < kPurifyPairs; ++i) {
        const Pair p = drifted_pair(rng);
        const auto n = p.reference.nodes.size();
        try {
            const auto t0 = Clock::now();
            const auto r = purify(p.local, p.reference);
            const double ms = ms_between(t0, Clock::now());
            worst_ms = std::max(worst_ms, ms);
            const bool good = r.final_report.mismatched == 0 && r.final_report.index.is_zero() &&
                              oracle_diff(r.purified, p.reference).m == 0 &&
                              canonically_equal(r.purified, p.reference) && r.iterations <= n && ms < kPurifyBudgetMs;
            if (good) ++ok;
            else if (first_failure.empty()) first_failure = " first failure at pair " + std::to_string(i);
        } catch (const std::exception& e) {
            if (first_failure.empty()) first_failure = " pair " + std::to_string(i) + " threw " + e.what();
        }
    }
    report(ok == kPurifyPairs, "purify-convergence",
           std::to_string(ok) + "/" + std::to_string(kPurifyPairs) +
               " pairs reach mi=0, equal the reference, rounds<=N; slowest " + fmt(worst_ms) + " ms (limit " +
               fmt(kPurifyBudgetMs) + " ms)" + first_failure);
}

void mi_oracle() {
    Rng rng(2002);
    int ok = 0;
    for (int i = 0; i < kOraclePairs; ++i) {
        // Drift both sides from a common base so every mismatch kind shows up.
        const Ontology base = random_ontology(rng, 1 + rng() % kMaxReferenceNodes);
        Ontology local = base, reference = base;
        random_edits(local, rng, rng() % (kMaxEdits + 1));
        random_edits(reference, rng, rng() % (kMaxEdits + 1));
        const auto r = find_mismatches(local, reference);
        const auto o = oracle_diff(local, reference);
        bool same = r.mismatched == o.m && r.total == o.n && r.index == Rational(o.mi_num, o.mi_den) &&
                    r.mismatches.size() == o.kinds.size();
        auto it = o.kinds.begin();
        for (std::size_t k = 0; same && k < r.mismatches.size(); ++k, ++it) {
            std::set<std::string> names;
            for (auto kind : r.mismatches[k].kinds) names.emplace(kind_name(kind));
            same = r.mismatches[k].id.value == it->first && names == it->second;
        }
        ok += same;
    }
    report(ok == kOraclePairs, "mi-oracle",
           std::to_string(ok) + "/" + std::to_string(kOraclePairs) + " pairs: M, N, mi and per-id kinds exact (tolerance 0)");
}

void count_oracle() {
    Rng rng(3003);
    int ok = 0;
    for (int i = 0; i < kCountTrees; ++i) {
        Ontology o = random_ontology(rng, 1 + rng() % kMaxReferenceNodes);
        random_edits(o, rng, rng() % 20);
        ok += count_nodes(o) == bfs_count(o) && count_nodes(o) == o.nodes.size();
    }
    report(ok == kCountTrees, "count-oracle",
           std::to_string(ok) + "/" + std::to_string(kCountTrees) + " trees: count_nodes equals traversal count (tolerance 0)");
}

void round_trip() {
    Rng rng(4004);
    int ok = 0;
    for (int i = 0; i < kRoundTrips; ++i) {
        Ontology o = random_ontology(rng, 1 + rng() % kMaxReferenceNodes);
        random_edits(o, rng, rng() % 30);
        try {
            const std::string owl = serialize_owl(o);
            const std::string json = serialize_json(o);
            const Ontology a = parse_owl(owl);
            const Ontology b = parse_json(json);
            ok += canonically_equal(a, o) && canonically_equal(b, o) && owl == serialize_owl(o) &&
                  json == serialize_json(o) && serialize_owl(a) == owl && serialize_json(b) == json &&
                  serialize_owl(b) == owl;
        } catch (const std::exception&) {
        }
    }
    report(ok == kRoundTrips, "round-trip",
           std::to_string(ok) + "/" + std::to_string(kRoundTrips) +
               " ontologies equal after OWL and JSON round trips; output byte-identical");
}

void read_your_writes() {
    TempDir dir;
    const Ontology base = load_ontology(std::filesystem::path(ONTOPURE_SOURCE_DIR) / "data/theatre.owl");
    ServiceOptions opts;
    opts.snapshot_path = dir / "snapshot.json";
    opts.admin_token = "acceptance-token";
    Service service(base, std::nullopt, opts);

    httplib::Server server;
    server.new_task_queue = [] { return new httplib::ThreadPool(kReaders + 8); };
    mount_routes(server, service);
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    std::atomic<bool> done{false};
    std::atomic<long> reads{0}, torn{0}, regressions{0}, errors{0};
    std::atomic<int> warmed{0};
    std::vector<std::thread> readers;
    for (int r = 0; r < kReaders; ++r) {
        readers.emplace_back([&] {
            httplib::Client c("127.0.0.1", port);
            c.set_keep_alive(true);
            std::int64_t last = -1;
            while (!done.load()) {
                auto res = c.Get("/search?q=probe&domain=theatre");
                if (!res || res->status != 200) {
                    ++errors;
                    continue;
                }
                const Json j = Json::parse(res->body);
                const auto rev = j["revision"].get<std::int64_t>();
                // Each commit adds exactly one probe node, so a consistent snapshot
                // shows as many probes as its revision.
                const std::int64_t probes = j["outcome"] == "hits" ? static_cast<std::int64_t>(j["results"].size()) : 0;
                if (probes != rev) ++torn;
                if (rev < last) ++regressions;
                if (last < 0) ++warmed;
                last = rev;
                ++reads;
            }
        });
    }

    // Only start writing once every reader is in its loop.
    while (warmed.load() < kReaders) std::this_thread::yield();
    const long reads_before = reads.load();

    httplib::Client writer("127.0.0.1", port);
    const httplib::Headers auth{{"Authorization", "Bearer acceptance-token"}};
    int ok = 0;
    for (int i = 1; i <= kRywTrials; ++i) {
        const std::string label = "Probe " + std::to_string(i);
        Json req;
        req["parent"] = 1;
        req["label"] = label;
        auto res = writer.Post("/admin/nodes", auth, req.dump(), "application/json");
        if (!res || res->status != 200) continue;
        const auto r = Json::parse(res->body)["revision"].get<std::int64_t>();
        auto seen = writer.Get("/search?q=probe+" + std::to_string(i) + "&domain=theatre");
        if (!seen || seen->status != 200) continue;
        const Json j = Json::parse(seen->body);
        ok += j["revision"].get<std::int64_t>() >= r && j["outcome"] == "hits" && j["results"][0]["path"].back() == label;
        // Give readers a slice of the single core between writes.
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    const long during = reads.load() - reads_before;
    done = true;
    for (auto& t : readers) t.join();
    server.stop();
    runner.join();

    const bool persisted = canonically_equal(load_ontology(opts.snapshot_path), *service.snapshot()->ontology);
    report(ok == kRywTrials && torn == 0 && regressions == 0 && errors == 0 && persisted && during >= kRywTrials,
           "read-your-writes",
           std::to_string(ok) + "/" + std::to_string(kRywTrials) + " writes visible to the next search; " +
               std::to_string(during) + " reads during the writes by " + std::to_string(kReaders) + " readers, " +
               std::to_string(torn.load()) + " torn, " + std::to_string(regressions.load()) + " revision regressions, " +
               std::to_string(errors.load()) + " errors; snapshot on disk " + (persisted ? "current" : "STALE"));
}

void patch_replay() {
    Rng rng(6006);
    int ok = 0;
    for (int i = 0; i < kReplayTrials; ++i) {
        const Pair p = drifted_pair(rng);
        try {
            const auto r = purify(p.local, p.reference);
            Ontology replayed = p.local;
            for (const auto& op : r.log) apply_patch_in_place(replayed, op);
            // The log also survives its own JSON form.
            Ontology from_wire = p.local;
            for (const auto& op : patch_log_from_json(patch_log_to_json(r.log))) apply_patch_in_place(from_wire, op);
            ok += canonically_equal(replayed, r.purified) && serialize_json(replayed) == serialize_json(r.purified) &&
                  serialize_json(from_wire) == serialize_json(r.purified);
        } catch (const std::exception&) {
        }
    }
    report(ok == kReplayTrials, "patch-replay",
           std::to_string(ok) + "/" + std::to_string(kReplayTrials) + " logs replay onto the original to the purified result");
}

void bench_shape() {
    BenchConfig config;
    config.pages = 1000;
    config.queries = 50;
    config.seed = 42;
    std::ostringstream out, err;
    const auto t0 = Clock::now();
    const int code = cli::cmd_bench(std::filesystem::path(ONTOPURE_SOURCE_DIR) / "data/theatre.owl", config,
                                    cli::Common{}, out, err);
    const double ms = ms_between(t0, Clock::now());

    std::uint64_t onto = 0, keyword = 0;
    std::istringstream rows(out.str());
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        const auto value = std::stoull(line.substr(line.rfind(',') + 1));
        if (line.rfind("ontology,", 0) == 0) onto = value;
        if (line.rfind("keyword,", 0) == 0) keyword = value;
    }
    const double ratio = keyword == 0 ? 0.0 : static_cast<double>(onto) / static_cast<double>(keyword);
    const bool ok = code == 0 && onto >= keyword && static_cast<double>(onto) >= kBenchRatio * static_cast<double>(keyword) &&
                    keyword > 0 && ms < kBenchBudgetMs;
    char ratio_text[32];
    std::snprintf(ratio_text, sizeof ratio_text, "%.2f", ratio);
    report(ok, "bench-shape",
           "n=1000 m=50 seed=42: ontology " + std::to_string(onto) + " vs keyword " + std::to_string(keyword) +
               " perfect pages, ratio " + ratio_text + " (need >= 1.20); " + fmt(ms) + " ms (limit " +
               fmt(kBenchBudgetMs) + " ms)");
}

}  // namespace

int main() {
    purify_convergence();
    mi_oracle();
    count_oracle();
    round_trip();
    read_your_writes();
    patch_replay();
    bench_shape();
    return failures == 0 ? 0 : 1;
}
