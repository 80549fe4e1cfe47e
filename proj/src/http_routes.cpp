#include <httplib.h>

#include <charconv>

#include "ontopure/error.hpp"
#include "ontopure/service.hpp"
#include "ontopure/wire.hpp"

namespace ontopure {

namespace {

void send(httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
}

std::string bearer(const httplib::Request& req) {
    const auto header = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) return {};
    return header.substr(prefix.size());
}

std::optional<NodeId> path_id(const httplib::Request& req) {
    const auto& s = req.matches[1];
    std::uint64_t v = 0;
    const auto str = s.str();
    auto [p, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
    if (ec != std::errc{} || p != str.data() + str.size() || v == 0) return std::nullopt;
    return NodeId{v};
}

Reply bad_request(const std::string& detail) {
    Json j;
    j["error"] = "BadRequest";
    j["detail"] = detail;
    return {400, j.dump(), "application/json"};
}

}  // namespace

void mount_routes(httplib::Server& server, Service& service) {
    server.Get("/search", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.handle_search(param(req, "q"), param(req, "domain")));
    });
    server.Get("/ontology", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_ontology(Format::Json));
    });
    server.Get("/ontology.owl", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_ontology(Format::Owl));
    });
    server.Get("/report", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_report());
    });
    server.Get("/revision", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_revision());
    });

    server.Post("/admin/nodes", [&service](const httplib::Request& req, httplib::Response& res) {
        try {
            send(res, service.handle_mutation(bearer(req), parse_insert_body(req.body)));
        } catch (const OntologyError& e) {
            send(res, bad_request(e.detail()));
        }
    });
    server.Put(R"(/admin/nodes/(\d+))", [&service](const httplib::Request& req, httplib::Response& res) {
        const auto id = path_id(req);
        if (!id) return send(res, bad_request("node id must be a positive integer"));
        try {
            send(res, service.handle_mutation(bearer(req), parse_modify_body(*id, req.body)));
        } catch (const OntologyError& e) {
            send(res, bad_request(e.detail()));
        }
    });
    server.Delete(R"(/admin/nodes/(\d+))", [&service](const httplib::Request& req, httplib::Response& res) {
        const auto id = path_id(req);
        if (!id) return send(res, bad_request("node id must be a positive integer"));
        DeleteRequest request{*id, DeletePolicy::Subtree};
        if (auto p = param(req, "policy")) {
            auto policy = policy_from_name(*p);
            if (!policy) return send(res, bad_request("policy must be subtree or reparent"));
            request.policy = *policy;
        }
        send(res, service.handle_mutation(bearer(req), request));
    });
    server.Post("/admin/purify", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.handle_mutation(bearer(req), PurifyRequest{}));
    });
}

Ontology fetch_ontology(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    const auto rest = url.substr(scheme.size());
    const auto slash = rest.find('/');
    const std::string host = rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

    httplib::Client client("http://" + host);
    client.set_connection_timeout(3);
    client.set_read_timeout(10);
    auto res = client.Get(path);
    if (!res) throw OntologyError(ErrorCode::Io, "cannot reach " + url + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw OntologyError(ErrorCode::Io, "GET " + url + " returned HTTP " + std::to_string(res->status));
    return parse_ontology(res->body);
}

}  // namespace ontopure
