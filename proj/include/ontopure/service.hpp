#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ontopure/ontology.hpp"
#include "ontopure/owl_io.hpp"

namespace httplib {
class Server;
}

namespace ontopure {

// An immutable, fully committed state. Readers hold one of these for the
// duration of a request; writers publish a new one.
struct Snapshot {
    std::shared_ptr<const Ontology> ontology;
    std::uint64_t revision = 0;
};

struct InsertRequest {
    NodeId parent;
    std::string label;
    Synonyms synonyms;
    Properties properties;
};
struct ModifyRequest {
    NodeId id;
    NodeEdit edit;
};
struct DeleteRequest {
    NodeId id;
    DeletePolicy policy = DeletePolicy::Subtree;
};
struct PurifyRequest {};

using MutationRequest = std::variant<InsertRequest, ModifyRequest, DeleteRequest, PurifyRequest>;

// Request bodies of the admin endpoints. Throw OntologyError(JsonSyntax).
InsertRequest parse_insert_body(std::string_view body);
ModifyRequest parse_modify_body(NodeId id, std::string_view body);

// Transport-independent response.
struct Reply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    std::filesystem::path snapshot_path;  // persisted after every mutation; format by extension
    std::string admin_token;              // empty disables the admin endpoints
    bool auto_purify = true;
    // Test hook: runs between writing the temp snapshot and renaming it into place.
    std::function<void()> before_persist_rename;
};

// Single writer, many readers. A mutation runs on a private copy under the
// writer lock and is published only after it has been persisted. Readers hold
// a snapshot pointer, so they never see a half-applied change.
class Service {
public:
    Service(Ontology initial, std::optional<Ontology> reference, ServiceOptions options);

    std::shared_ptr<const Snapshot> snapshot() const;
    bool has_reference() const { return reference_.has_value(); }

    Reply handle_search(const std::optional<std::string>& q, const std::optional<std::string>& domain);
    Reply handle_mutation(std::string_view token, const MutationRequest& request);
    Reply handle_report() const;
    Reply handle_ontology(Format format) const;
    Reply handle_revision() const;

private:
    // Runs `mutate` on a copy of the latest snapshot under the writer lock.
    // When `mutate` returns false nothing is committed and the current snapshot is returned.
    std::shared_ptr<const Snapshot> commit(const std::function<bool(Ontology&)>& mutate);
    void persist(const Ontology& ontology) const;

    const std::optional<Ontology> reference_;
    const ServiceOptions options_;

    std::mutex writer_;
    mutable std::mutex publish_;
    std::shared_ptr<const Snapshot> current_;
};

struct ServiceConfig {
    std::filesystem::path snapshot_path;
    std::string reference_path_or_url;  // empty: no reference
    std::string bind_addr = "127.0.0.1:8080";
    std::string admin_token_env = "ONTOPURE_ADMIN_TOKEN";
    bool auto_purify = true;
    std::filesystem::path static_dir;  // optional web client assets
};

// Loads and validates the snapshot (throws OntologyError on failure), then
// tries the reference. A reference that cannot be loaded or is incompatible
// is logged as a warning and the service runs without one.
std::unique_ptr<Service> start_service(const ServiceConfig& config, std::ostream& log);

// Fetches an ontology over plain HTTP. Throws OntologyError(Io) when unreachable.
Ontology fetch_ontology(const std::string& url);

// Registers every endpoint on `server`.
void mount_routes(httplib::Server& server, Service& service);

}  // namespace ontopure
