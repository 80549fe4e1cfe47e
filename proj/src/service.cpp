#include "ontopure/service.hpp"

#include <cstdlib>
#include <ostream>

#include "ontopure/atomic_file.hpp"
#include "ontopure/diff.hpp"
#include "ontopure/error.hpp"
#include "ontopure/purify.hpp"
#include "ontopure/search.hpp"
#include "ontopure/wire.hpp"

namespace ontopure {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Reply json_reply(int status, const Json& body) { return {status, body.dump(), "application/json"}; }

Reply error_reply(int status, std::string_view code, const std::string& detail) {
    Json j;
    j["error"] = code;
    j["detail"] = detail;
    return json_reply(status, j);
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyQuery:
        case ErrorCode::DomainMismatch:
        case ErrorCode::JsonSyntax: return 400;
        case ErrorCode::Io: return 500;
        case ErrorCode::NonConvergence: return 500;
        default: return 409;
    }
}

bool same_token(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    unsigned char diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
    return diff == 0;
}

Synonyms synonyms_field(const Json& j, const char* key) {
    Synonyms out;
    for (const auto& v : j.at(key)) out.insert(v.get<std::string>());
    return out;
}

Properties properties_field(const Json& j, const char* key) {
    Properties out;
    for (const auto& [k, v] : j.at(key).items()) out[k] = v.get<std::string>();
    return out;
}

Json parse_body(std::string_view body) {
    try {
        Json j = body.empty() ? Json::object() : Json::parse(body.begin(), body.end());
        if (!j.is_object()) throw OntologyError(ErrorCode::JsonSyntax, "request body must be an object");
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw OntologyError(ErrorCode::JsonSyntax, e.what());
    }
}

}  // namespace

InsertRequest parse_insert_body(std::string_view body) {
    const Json j = parse_body(body);
    try {
        InsertRequest r;
        r.parent = NodeId{j.at("parent").get<std::uint64_t>()};
        r.label = j.at("label").get<std::string>();
        if (j.contains("synonyms")) r.synonyms = synonyms_field(j, "synonyms");
        if (j.contains("properties")) r.properties = properties_field(j, "properties");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw OntologyError(ErrorCode::JsonSyntax, e.what());
    }
}

ModifyRequest parse_modify_body(NodeId id, std::string_view body) {
    const Json j = parse_body(body);
    try {
        ModifyRequest r;
        r.id = id;
        if (j.contains("label") && !j.at("label").is_null()) r.edit.label = j.at("label").get<std::string>();
        if (j.contains("synonyms") && !j.at("synonyms").is_null()) r.edit.synonyms = synonyms_field(j, "synonyms");
        if (j.contains("properties") && !j.at("properties").is_null())
            r.edit.properties = properties_field(j, "properties");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw OntologyError(ErrorCode::JsonSyntax, e.what());
    }
}

Service::Service(Ontology initial, std::optional<Ontology> reference, ServiceOptions options)
    : reference_(std::move(reference)),
      options_(std::move(options)),
      current_(std::make_shared<const Snapshot>(Snapshot{std::make_shared<const Ontology>(std::move(initial)), 0})) {}

std::shared_ptr<const Snapshot> Service::snapshot() const {
    std::lock_guard lock(publish_);
    return current_;
}

void Service::persist(const Ontology& ontology) const {
    if (options_.snapshot_path.empty()) return;
    const auto format = format_for_path(options_.snapshot_path);
    write_file_atomic(options_.snapshot_path, serialize(ontology, format), options_.before_persist_rename);
}

std::shared_ptr<const Snapshot> Service::commit(const std::function<bool(Ontology&)>& mutate) {
    std::lock_guard lock(writer_);
    const auto base = snapshot();
    auto next = std::make_shared<Ontology>(*base->ontology);
    if (!mutate(*next)) return base;
    persist(*next);
    auto published = std::make_shared<const Snapshot>(Snapshot{std::move(next), base->revision + 1});
    {
        std::lock_guard publish(publish_);
        current_ = published;
    }
    return published;
}

Reply Service::handle_search(const std::optional<std::string>& q, const std::optional<std::string>& domain) {
    try {
        if (!q) throw OntologyError(ErrorCode::EmptyQuery, "missing q parameter");
        if (!domain) throw OntologyError(ErrorCode::DomainMismatch, "missing domain parameter");
        const Query query = Query::parse(*q, *domain);
        const Ontology* ref = reference_ ? &*reference_ : nullptr;

        auto snap = snapshot();
        SearchOutcome outcome = search(*snap->ontology, ref, query);
        if (std::holds_alternative<NeedsPurification>(outcome) && options_.auto_purify && ref != nullptr) {
            snap = commit([&](Ontology& o) {
                auto result = purify(o, *ref);
                if (result.log.empty()) return false;
                o = std::move(result.purified);
                return true;
            });
            outcome = search(*snap->ontology, ref, query);
        }
        Json body = outcome_to_json(outcome);
        body["revision"] = snap->revision;
        return json_reply(200, body);
    } catch (const OntologyError& e) {
        if (e.code() == ErrorCode::Io) return error_reply(500, "PersistenceFailure", e.detail());
        return error_reply(status_for(e.code()), code_name(e.code()), e.detail());
    }
}

Reply Service::handle_mutation(std::string_view token, const MutationRequest& request) {
    if (options_.admin_token.empty() || !same_token(token, options_.admin_token))
        return error_reply(401, "BadToken", "missing or wrong bearer token");
    if (std::holds_alternative<PurifyRequest>(request) && !reference_)
        return error_reply(404, "NoReference", "no reference ontology configured");

    Json result;
    std::optional<Json> patch_log;
    try {
        const auto snap = commit([&](Ontology& o) {
            return std::visit(
                overloaded{
                    [&](const InsertRequest& r) {
                        const NodeId id = insert_node(o, r.parent, r.label, r.synonyms, r.properties);
                        result = node_to_json(o.nodes.at(id));
                        return true;
                    },
                    [&](const ModifyRequest& r) {
                        result = node_to_json(modify_node(o, r.id, r.edit));
                        return true;
                    },
                    [&](const DeleteRequest& r) {
                        Json removed = Json::array();
                        for (NodeId id : delete_node(o, r.id, r.policy)) removed.push_back(id.value);
                        result = Json::object();
                        result["removed"] = std::move(removed);
                        return true;
                    },
                    [&](const PurifyRequest&) {
                        auto pr = purify(o, *reference_);
                        patch_log = patch_log_to_json(pr.log);
                        result = report_to_json(pr.final_report);
                        if (pr.log.empty()) return false;
                        o = std::move(pr.purified);
                        return true;
                    },
                },
                request);
        });
        Json body;
        body["revision"] = snap->revision;
        if (patch_log) body["patchLog"] = std::move(*patch_log);
        body["result"] = std::move(result);
        return json_reply(200, body);
    } catch (const OntologyError& e) {
        if (e.code() == ErrorCode::Io) return error_reply(500, "PersistenceFailure", e.detail());
        return error_reply(status_for(e.code()), code_name(e.code()), e.detail());
    }
}

Reply Service::handle_report() const {
    if (!reference_) return error_reply(404, "NoReference", "no reference ontology configured");
    try {
        return json_reply(200, report_to_json(find_mismatches(*snapshot()->ontology, *reference_)));
    } catch (const OntologyError& e) {
        return error_reply(status_for(e.code()), code_name(e.code()), e.detail());
    }
}

Reply Service::handle_ontology(Format format) const {
    const auto snap = snapshot();
    if (format == Format::Owl) return {200, serialize_owl(*snap->ontology), "application/rdf+xml"};
    return {200, serialize_json(*snap->ontology), "application/json"};
}

Reply Service::handle_revision() const {
    Json j;
    j["revision"] = snapshot()->revision;
    return json_reply(200, j);
}

std::unique_ptr<Service> start_service(const ServiceConfig& config, std::ostream& log) {
    Ontology local = load_ontology(config.snapshot_path);
    if (auto violations = validate(local); !violations.empty())
        throw OntologyError(ErrorCode::InvalidArgument, violations.front().detail, config.snapshot_path.string());

    std::optional<Ontology> reference;
    if (!config.reference_path_or_url.empty()) {
        const auto& src = config.reference_path_or_url;
        try {
            reference = src.rfind("http://", 0) == 0 ? fetch_ontology(src) : load_ontology(src);
            if (compare_versions(local, *reference) == VersionRelation::Incompatible)
                throw OntologyError(ErrorCode::IncompatibleVersions,
                                    "reference " + reference->version.version + " is incompatible with local " +
                                        local.version.version);
        } catch (const OntologyError& e) {
            log << "warning: reference disabled (" << src << "): " << e.what() << "\n";
            reference.reset();
        }
    }

    ServiceOptions options;
    options.snapshot_path = config.snapshot_path;
    options.auto_purify = config.auto_purify;
    if (const char* token = std::getenv(config.admin_token_env.c_str()); token != nullptr) options.admin_token = token;
    if (options.admin_token.empty())
        log << "warning: " << config.admin_token_env << " is not set; admin endpoints will refuse every request\n";

    log << "loaded " << config.snapshot_path.string() << " (" << local.nodes.size() << " nodes, domain '"
        << local.domain << "', version " << local.version.version << "), revision 0\n";
    return std::make_unique<Service>(std::move(local), std::move(reference), std::move(options));
}

}  // namespace ontopure
