#include "ontopure/wire.hpp"

#include "ontopure/error.hpp"

namespace ontopure {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& why) { throw OntologyError(ErrorCode::JsonSyntax, why); }

const Json& at(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing \"") + key + "\"");
    return *it;
}

NodeId id_at(const Json& j, const char* key) { return NodeId{at(j, key).get<std::uint64_t>()}; }

Json properties_to_json(const Properties& props) {
    Json out = Json::object();
    for (const auto& [k, v] : props) out[k] = v;
    return out;
}

Properties properties_from_json(const Json& j) {
    Properties out;
    for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
    return out;
}

Json synonyms_to_json(const Synonyms& s) { return Json(std::vector<std::string>(s.begin(), s.end())); }

Synonyms synonyms_from_json(const Json& j) {
    Synonyms s;
    for (const auto& v : j) s.insert(v.get<std::string>());
    return s;
}

}  // namespace

std::string_view policy_name(DeletePolicy policy) noexcept {
    return policy == DeletePolicy::Subtree ? "subtree" : "reparent";
}

std::optional<DeletePolicy> policy_from_name(std::string_view name) noexcept {
    if (name == "subtree") return DeletePolicy::Subtree;
    if (name == "reparent") return DeletePolicy::ReparentChildren;
    return std::nullopt;
}

Json node_to_json(const OntologyNode& n) {
    Json j;
    j["id"] = n.id.value;
    j["label"] = n.label;
    j["parent"] = n.parent ? Json(n.parent->value) : Json(nullptr);
    j["synonyms"] = synonyms_to_json(n.synonyms);
    j["properties"] = properties_to_json(n.properties);
    return j;
}

OntologyNode node_from_json(const Json& j) {
    OntologyNode n;
    n.id = id_at(j, "id");
    n.label = at(j, "label").get<std::string>();
    if (auto it = j.find("parent"); it != j.end() && !it->is_null()) n.parent = NodeId{it->get<std::uint64_t>()};
    if (auto it = j.find("synonyms"); it != j.end()) n.synonyms = synonyms_from_json(*it);
    if (auto it = j.find("properties"); it != j.end()) n.properties = properties_from_json(*it);
    return n;
}

Json version_to_json(const VersionHeader& h) {
    Json j;
    j["version"] = h.version;
    j["backwardCompatibleWith"] = h.backward_compatible_with;
    j["incompatibleWith"] = h.incompatible_with;
    j["priorVersion"] = h.prior_version ? Json(*h.prior_version) : Json(nullptr);
    return j;
}

VersionHeader version_from_json(const Json& j) {
    VersionHeader h;
    h.version = at(j, "version").get<std::string>();
    h.backward_compatible_with = at(j, "backwardCompatibleWith").get<std::vector<std::string>>();
    h.incompatible_with = at(j, "incompatibleWith").get<std::vector<std::string>>();
    if (const auto& p = at(j, "priorVersion"); !p.is_null()) h.prior_version = p.get<std::string>();
    return h;
}

Json ontology_to_json(const Ontology& o) {
    Json j;
    j["domain"] = o.domain;
    j["version"] = version_to_json(o.version);
    Json nodes = Json::array();
    for (const auto& [id, node] : o.nodes) nodes.push_back(node_to_json(node));
    j["nodes"] = std::move(nodes);
    return j;
}

Json report_to_json(const MismatchReport& r) {
    Json list = Json::array();
    for (const auto& m : r.mismatches) {
        Json e;
        e["id"] = m.id.value;
        Json kinds = Json::array();
        for (auto k : m.kinds) kinds.push_back(kind_name(k));
        e["kinds"] = std::move(kinds);
        e["local"] = m.local_state ? node_to_json(*m.local_state) : Json(nullptr);
        e["reference"] = m.reference_state ? node_to_json(*m.reference_state) : Json(nullptr);
        list.push_back(std::move(e));
    }
    Json j;
    j["mismatches"] = std::move(list);
    j["M"] = r.mismatched;
    j["N"] = r.total;
    j["mi"] = std::to_string(r.mismatched) + "/" + std::to_string(r.total);
    j["miDecimal"] = r.index.to_double();
    return j;
}

MismatchReport report_from_json(const Json& j) {
    try {
        MismatchReport r;
        for (const auto& e : at(j, "mismatches")) {
            Mismatch m;
            m.id = id_at(e, "id");
            for (const auto& k : at(e, "kinds")) {
                auto kind = kind_from_name(k.get<std::string>());
                if (!kind) bad("unknown mismatch kind " + k.dump());
                m.kinds.insert(*kind);
            }
            if (const auto& l = at(e, "local"); !l.is_null()) m.local_state = node_from_json(l);
            if (const auto& ref = at(e, "reference"); !ref.is_null()) m.reference_state = node_from_json(ref);
            r.mismatches.push_back(std::move(m));
        }
        r.mismatched = at(j, "M").get<std::uint64_t>();
        r.total = at(j, "N").get<std::uint64_t>();
        r.index = r.total == 0 ? Rational{} : Rational(static_cast<std::int64_t>(r.mismatched),
                                                       static_cast<std::int64_t>(r.total));
        return r;
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
}

Json patch_to_json(const PatchOp& op) {
    Json args = std::visit(
        overloaded{
            [](const AddOp& a) {
                Json j;
                j["parent"] = a.parent ? Json(a.parent->value) : Json(nullptr);
                j["node"] = node_to_json(a.node);
                return j;
            },
            [](const DeleteOp& d) {
                Json j;
                j["id"] = d.id.value;
                j["policy"] = policy_name(d.policy);
                return j;
            },
            [](const ModifyOp& m) {
                Json j;
                j["id"] = m.id.value;
                if (m.edit.label) j["label"] = *m.edit.label;
                if (m.edit.synonyms) j["synonyms"] = synonyms_to_json(*m.edit.synonyms);
                if (m.edit.properties) j["properties"] = properties_to_json(*m.edit.properties);
                return j;
            },
            [](const MoveOp& m) {
                Json j;
                j["id"] = m.id.value;
                j["newParent"] = m.new_parent.value;
                return j;
            },
            [](const SetHeaderOp& h) {
                Json j;
                j["domain"] = h.domain;
                j["version"] = version_to_json(h.version);
                return j;
            },
        },
        op.action);
    Json j;
    j["seq"] = op.seq;
    j["op"] = op_name(op.action);
    j["args"] = std::move(args);
    return j;
}

PatchOp patch_from_json(const Json& j) {
    try {
        PatchOp op;
        op.seq = at(j, "seq").get<std::uint64_t>();
        const auto name = at(j, "op").get<std::string>();
        const Json& args = at(j, "args");
        if (name == "add") {
            AddOp a;
            if (const auto& p = at(args, "parent"); !p.is_null()) a.parent = NodeId{p.get<std::uint64_t>()};
            a.node = node_from_json(at(args, "node"));
            op.action = std::move(a);
        } else if (name == "delete") {
            auto policy = policy_from_name(at(args, "policy").get<std::string>());
            if (!policy) bad("unknown delete policy");
            op.action = DeleteOp{id_at(args, "id"), *policy};
        } else if (name == "modify") {
            ModifyOp m;
            m.id = id_at(args, "id");
            if (auto it = args.find("label"); it != args.end()) m.edit.label = it->get<std::string>();
            if (auto it = args.find("synonyms"); it != args.end()) m.edit.synonyms = synonyms_from_json(*it);
            if (auto it = args.find("properties"); it != args.end()) m.edit.properties = properties_from_json(*it);
            op.action = std::move(m);
        } else if (name == "move") {
            op.action = MoveOp{id_at(args, "id"), id_at(args, "newParent")};
        } else if (name == "setHeader") {
            op.action = SetHeaderOp{at(args, "domain").get<std::string>(), version_from_json(at(args, "version"))};
        } else {
            bad("unknown patch op \"" + name + "\"");
        }
        return op;
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
}

Json patch_log_to_json(const std::vector<PatchOp>& log) {
    Json j = Json::array();
    for (const auto& op : log) j.push_back(patch_to_json(op));
    return j;
}

std::vector<PatchOp> patch_log_from_json(const Json& j) {
    std::vector<PatchOp> log;
    for (const auto& e : j) log.push_back(patch_from_json(e));
    return log;
}

Json outcome_to_json(const SearchOutcome& outcome) {
    Json j;
    j["outcome"] = outcome_name(outcome);
    Json results = Json::array();
    if (const auto* hits = std::get_if<Hits>(&outcome)) {
        for (const auto& r : hits->results) {
            Json e;
            e["id"] = r.id.value;
            e["path"] = r.path;
            e["score"] = r.score.to_double();
            Json links = Json::array();
            for (NodeId c : r.links) links.push_back(c.value);
            e["links"] = std::move(links);
            results.push_back(std::move(e));
        }
    }
    j["results"] = std::move(results);
    const auto* needs = std::get_if<NeedsPurification>(&outcome);
    j["report"] = needs != nullptr ? report_to_json(needs->report) : Json(nullptr);
    return j;
}

SearchOutcome outcome_from_json(const Json& j) {
    try {
        const auto kind = at(j, "outcome").get<std::string>();
        if (kind == "noMatch") return NoMatch{};
        if (kind == "needsPurification") return NeedsPurification{report_from_json(at(j, "report"))};
        if (kind != "hits") bad("unknown outcome \"" + kind + "\"");
        Hits hits;
        for (const auto& e : at(j, "results")) {
            SearchResult r;
            r.id = id_at(e, "id");
            r.path = at(e, "path").get<std::vector<std::string>>();
            // Scores are whole or half units.
            r.score = Rational(static_cast<std::int64_t>(at(e, "score").get<double>() * 2 + 0.5), 2);
            for (const auto& c : at(e, "links")) r.links.push_back(NodeId{c.get<std::uint64_t>()});
            hits.results.push_back(std::move(r));
        }
        return hits;
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }
}

}  // namespace ontopure
