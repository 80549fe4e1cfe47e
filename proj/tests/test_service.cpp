#include <doctest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "ontopure/diff.hpp"
#include "ontopure/error.hpp"
#include "ontopure/owl_io.hpp"
#include "ontopure/service.hpp"
#include "ontopure/wire.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace ontopure;
using ontopure::testing::TempDir;

namespace {

const std::filesystem::path kData = std::filesystem::path(ONTOPURE_SOURCE_DIR) / "data";
const std::string kToken = "s3cret";

Ontology theatre() { return load_ontology(kData / "theatre.owl"); }

Json body(const Reply& r) { return Json::parse(r.body); }

struct Fixture {
    TempDir dir;
    std::filesystem::path snapshot = dir / "snapshot.json";

    std::unique_ptr<Service> make(Ontology local, std::optional<Ontology> ref = std::nullopt, bool auto_purify = true) {
        std::ofstream(snapshot) << serialize_json(local);
        ServiceOptions opts;
        opts.snapshot_path = snapshot;
        opts.admin_token = kToken;
        opts.auto_purify = auto_purify;
        return std::make_unique<Service>(std::move(local), std::move(ref), std::move(opts));
    }
};

InsertRequest insert(std::uint64_t parent, std::string label) {
    InsertRequest r;
    r.parent = NodeId{parent};
    r.label = std::move(label);
    return r;
}

}  // namespace

TEST_CASE("search endpoint") {
    Fixture f;
    auto svc = f.make(theatre());
    const Reply ok = svc->handle_search(std::string("theatre"), std::string("theatre"));
    CHECK(ok.status == 200);
    const Json j = body(ok);
    CHECK(j["outcome"] == "hits");
    CHECK(j["results"][0]["id"] == 1);
    CHECK(j["revision"] == 0);

    const Reply no_q = svc->handle_search(std::nullopt, std::string("theatre"));
    CHECK(no_q.status == 400);
    CHECK(body(no_q)["error"] == "EmptyQuery");
    CHECK(svc->handle_search(std::string("!!"), std::string("theatre")).status == 400);
    const Reply wrong_domain = svc->handle_search(std::string("opera"), std::string("music"));
    CHECK(wrong_domain.status == 400);
    CHECK(body(wrong_domain)["error"] == "DomainMismatch");
}

TEST_CASE("admin mutations are immediately visible and persisted") {
    Fixture f;
    auto svc = f.make(theatre());

    const Reply r = svc->handle_mutation(kToken, insert(1, "Mime"));
    REQUIRE(r.status == 200);
    const Json j = body(r);
    CHECK(j["revision"] == 1);
    CHECK(j["result"]["label"] == "Mime");
    const auto id = j["result"]["id"].get<std::uint64_t>();

    const Json found = body(svc->handle_search(std::string("mime"), std::string("theatre")));
    CHECK(found["revision"].get<std::uint64_t>() >= 1);
    CHECK(found["results"][0]["id"] == id);

    const Ontology on_disk = load_ontology(f.snapshot);
    CHECK(canonically_equal(on_disk, *svc->snapshot()->ontology));

    ModifyRequest m;
    m.id = NodeId{id};
    m.edit.label = "Pantomime";
    CHECK(body(svc->handle_mutation(kToken, m))["revision"] == 2);
    CHECK(body(svc->handle_mutation(kToken, DeleteRequest{NodeId{id}, DeletePolicy::Subtree}))["result"]["removed"] ==
          Json::array({id}));
    CHECK(svc->snapshot()->revision == 3);
    CHECK(load_ontology(f.snapshot).nodes.count(NodeId{id}) == 0);
}

TEST_CASE("admin rejections") {
    Fixture f;
    auto svc = f.make(theatre());
    const Reply bad = svc->handle_mutation("nope", insert(1, "Mime"));
    CHECK(bad.status == 401);
    CHECK(body(bad)["error"] == "BadToken");
    CHECK(svc->handle_mutation("", insert(1, "Mime")).status == 401);
    CHECK(svc->snapshot()->revision == 0);

    const Reply root = svc->handle_mutation(kToken, DeleteRequest{NodeId{1}, DeletePolicy::Subtree});
    CHECK(root.status == 409);
    CHECK(body(root)["error"] == "CannotDeleteRoot");
    CHECK(body(svc->handle_mutation(kToken, insert(999, "X")))["error"] == "UnknownParent");
    CHECK(body(svc->handle_mutation(kToken, insert(1, "Drama")))["error"] == "DuplicateSiblingLabel");
    CHECK(svc->snapshot()->revision == 0);

    ServiceOptions no_token;
    Service locked(theatre(), std::nullopt, no_token);
    CHECK(locked.handle_mutation("", insert(1, "Mime")).status == 401);
}

TEST_CASE("persistence failure rolls the mutation back") {
    Fixture f;
    const Ontology original = theatre();
    std::ofstream(f.snapshot) << serialize_json(original);
    ServiceOptions opts;
    opts.snapshot_path = f.snapshot;
    opts.admin_token = kToken;
    bool fail = true;
    opts.before_persist_rename = [&] {
        if (fail) throw OntologyError(ErrorCode::Io, "injected crash before rename");
    };
    Service svc(original, std::nullopt, opts);

    const Reply r = svc.handle_mutation(kToken, insert(1, "Mime"));
    CHECK(r.status == 500);
    CHECK(body(r)["error"] == "PersistenceFailure");
    CHECK(svc.snapshot()->revision == 0);
    CHECK(canonically_equal(*svc.snapshot()->ontology, original));
    // The old snapshot is still on disk and no temp file lingers.
    CHECK(canonically_equal(load_ontology(f.snapshot), original));
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(f.dir.path())) ++files;
    CHECK(files == 1);

    fail = false;
    CHECK(body(svc.handle_mutation(kToken, insert(1, "Mime")))["revision"] == 1);
}

TEST_CASE("report endpoint") {
    Fixture f;
    {
        auto svc = f.make(theatre());
        const Reply r = svc->handle_report();
        CHECK(r.status == 404);
        CHECK(body(r)["error"] == "NoReference");
        CHECK(svc->handle_mutation(kToken, PurifyRequest{}).status == 404);
    }
    {
        auto svc = f.make(theatre(), theatre());
        const Json j = body(svc->handle_report());
        CHECK(j["M"] == 0);
        CHECK(j["miDecimal"] == 0.0);
    }
    {
        const Ontology ref = theatre();
        Ontology local = ref;
        NodeEdit e;
        e.label = "Stagecraft";
        modify_node(local, NodeId{29}, e);
        move_node(local, NodeId{16}, NodeId{11});
        auto svc = f.make(local, ref);
        const Json j = body(svc->handle_report());
        const auto oracle = ontopure::testing::oracle_diff(local, ref);
        CHECK(j["M"] == 2);
        CHECK(j["M"] == oracle.m);
        CHECK(j["N"] == oracle.n);
        CHECK(report_from_json(j).index == Rational(oracle.mi_num, oracle.mi_den));
        CHECK(svc->snapshot()->revision == 0);
    }
}

TEST_CASE("search on a stale copy purifies once and bumps the revision") {
    const Ontology ref = theatre();
    Ontology local = ref;
    delete_node(local, NodeId{22}, DeletePolicy::Subtree);

    Fixture f;
    SUBCASE("auto purify") {
        auto svc = f.make(local, ref);
        const Json j = body(svc->handle_search(std::string("kabuki"), std::string("theatre")));
        CHECK(j["outcome"] == "hits");
        CHECK(j["revision"] == 1);
        CHECK(canonically_equal(load_ontology(f.snapshot), ref));
        // Already purified: an explicit purify changes nothing.
        const Json again = body(svc->handle_mutation(kToken, PurifyRequest{}));
        CHECK(again["patchLog"].empty());
        CHECK(again["revision"] == 1);
    }
    SUBCASE("auto purify disabled returns the signal verbatim") {
        auto svc = f.make(local, ref, false);
        const Json j = body(svc->handle_search(std::string("kabuki"), std::string("theatre")));
        CHECK(j["outcome"] == "needsPurification");
        CHECK(j["report"]["M"] == 1);
        CHECK(j["revision"] == 0);
        const Json p = body(svc->handle_mutation(kToken, PurifyRequest{}));
        CHECK(p["revision"] == 1);
        CHECK(p["patchLog"].size() == 1);
        CHECK(p["patchLog"][0]["op"] == "add");
    }
}

TEST_CASE("startup") {
    TempDir dir;
    std::ostringstream log;
    SUBCASE("corrupt snapshot refuses to start with a location") {
        ServiceConfig c;
        c.snapshot_path = std::filesystem::path(ONTOPURE_SOURCE_DIR) / "tests/fixtures/corrupt.owl";
        try {
            start_service(c, log);
            FAIL("expected failure");
        } catch (const OntologyError& e) {
            CHECK(e.code() == ErrorCode::XmlSyntax);
            CHECK_FALSE(e.location().empty());
        }
    }
    SUBCASE("unreachable reference degrades with a warning") {
        ServiceConfig c;
        c.snapshot_path = dir / "s.json";
        std::ofstream(c.snapshot_path) << serialize_json(theatre());
        c.reference_path_or_url = "http://127.0.0.1:1/theatre.owl";
        auto svc = start_service(c, log);
        CHECK_FALSE(svc->has_reference());
        CHECK(log.str().find("warning") != std::string::npos);
        CHECK(log.str().find("revision 0") != std::string::npos);
    }
    SUBCASE("incompatible reference is disabled") {
        ServiceConfig c;
        c.snapshot_path = dir / "s.json";
        std::ofstream(c.snapshot_path) << serialize_json(theatre());
        c.reference_path_or_url =
            (std::filesystem::path(ONTOPURE_SOURCE_DIR) / "tests/fixtures/theatre-2.0-incompatible.owl").string();
        CHECK_FALSE(start_service(c, log)->has_reference());
    }
    SUBCASE("compatible reference is kept") {
        ServiceConfig c;
        c.snapshot_path = dir / "s.json";
        std::ofstream(c.snapshot_path) << serialize_json(theatre());
        c.reference_path_or_url = (kData / "theatre-1.1.owl").string();
        CHECK(start_service(c, log)->has_reference());
    }
}

TEST_CASE("HTTP routes") {
    Fixture f;
    auto svc = f.make(theatre(), load_ontology(kData / "theatre-1.1.owl"), false);
    httplib::Server server;
    mount_routes(server, *svc);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const httplib::Headers auth{{"Authorization", "Bearer " + kToken}};

    auto res = client.Get("/ontology");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == serialize_json(*svc->snapshot()->ontology));
    res = client.Get("/ontology.owl");
    CHECK(res->body == serialize_owl(*svc->snapshot()->ontology));
    CHECK(Json::parse(client.Get("/revision")->body)["revision"] == 0);
    CHECK(Json::parse(client.Get("/report")->body)["M"] == 5);

    res = client.Get("/search?q=theatre&domain=theatre");
    CHECK(res->status == 200);
    CHECK(Json::parse(res->body)["outcome"] == "hits");
    CHECK(client.Get("/search?domain=theatre")->status == 400);

    res = client.Post("/admin/nodes", R"({"parent":1,"label":"Mime","synonyms":["Pantomime"]})", "application/json");
    CHECK(res->status == 401);
    res = client.Post("/admin/nodes", auth, R"({"parent":1,"label":"Mime","synonyms":["Pantomime"]})",
                      "application/json");
    REQUIRE(res->status == 200);
    const auto id = Json::parse(res->body)["result"]["id"].get<std::uint64_t>();
    CHECK(Json::parse(client.Get("/search?q=pantomime&domain=theatre")->body)["results"][0]["id"] == id);

    CHECK(client.Post("/admin/nodes", auth, "{not json", "application/json")->status == 400);
    res = client.Put("/admin/nodes/" + std::to_string(id), auth, R"({"label":"Mime Theatre"})", "application/json");
    CHECK(res->status == 200);
    CHECK(Json::parse(res->body)["result"]["label"] == "Mime Theatre");

    res = client.Delete("/admin/nodes/1", auth);
    CHECK(res->status == 409);
    CHECK(Json::parse(res->body)["error"] == "CannotDeleteRoot");
    CHECK(client.Delete("/admin/nodes/2?policy=sideways", auth)->status == 400);
    res = client.Delete("/admin/nodes/2?policy=reparent", auth);
    CHECK(res->status == 200);
    CHECK(Json::parse(res->body)["result"]["removed"] == Json::array({2}));

    res = client.Post("/admin/purify", auth, "{}", "application/json");
    REQUIRE(res->status == 200);
    const Json p = Json::parse(res->body);
    CHECK(p["revision"] == 4);
    CHECK_FALSE(p["patchLog"].empty());
    CHECK(p["result"]["M"] == 0);
    CHECK(Json::parse(client.Get("/report")->body)["M"] == 0);

    server.stop();
    runner.join();
}
