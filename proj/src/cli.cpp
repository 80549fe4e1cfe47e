#include "ontopure/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ontopure/atomic_file.hpp"
#include "ontopure/diff.hpp"
#include "ontopure/error.hpp"
#include "ontopure/purify.hpp"
#include "ontopure/search.hpp"
#include "ontopure/wire.hpp"

namespace ontopure::cli {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int fail(std::ostream& err, int code, const std::string& msg) {
    err << "error: " << msg << "\n";
    return code;
}

std::string fixed4(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << v;
    return ss.str();
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string describe(const PatchOp& op) {
    std::string line = "#" + std::to_string(op.seq) + " ";
    line += std::visit(
        overloaded{
            [](const AddOp& a) {
                return "add n" + std::to_string(a.node.id.value) + " " + quoted(a.node.label) +
                       (a.parent ? " under n" + std::to_string(a.parent->value) : std::string(" as root"));
            },
            [](const DeleteOp& d) {
                return "delete n" + std::to_string(d.id.value) + " (" + std::string(policy_name(d.policy)) + ")";
            },
            [](const ModifyOp& m) {
                std::string s = "modify n" + std::to_string(m.id.value);
                if (m.edit.label) s += " label=" + quoted(*m.edit.label);
                if (m.edit.synonyms) s += " synonyms";
                if (m.edit.properties) s += " properties";
                return s;
            },
            [](const MoveOp& m) {
                return "move n" + std::to_string(m.id.value) + " -> n" + std::to_string(m.new_parent.value);
            },
            [](const SetHeaderOp& h) {
                return "set header domain=" + quoted(h.domain) + " version=" + quoted(h.version.version);
            },
        },
        op.action);
    return line;
}

void print_report_table(const MismatchReport& r, std::ostream& out) {
    if (!r.mismatches.empty()) {
        out << std::left << std::setw(8) << "id" << std::setw(34) << "kinds" << std::setw(24) << "local"
            << "reference\n";
        for (const auto& m : r.mismatches) {
            std::string kinds;
            for (auto k : m.kinds) {
                if (!kinds.empty()) kinds += ",";
                kinds += kind_name(k);
            }
            out << std::left << std::setw(8) << m.id.value << std::setw(34) << kinds << std::setw(24)
                << (m.local_state ? m.local_state->label : "-")
                << (m.reference_state ? m.reference_state->label : "-") << "\n";
        }
    }
    out << r.mismatched << "/" << r.total << " = " << fixed4(r.index.to_double()) << "\n";
}

Ontology load(const std::filesystem::path& path, const Common& opts) { return load_ontology(path, opts.format); }

std::string error_text(const OntologyError& e, const std::filesystem::path& path) {
    return path.string() + ": " + e.what();
}

std::sig_atomic_t volatile g_stop_requested = 0;
httplib::Server* g_server = nullptr;

void on_signal(int) {
    g_stop_requested = 1;
    if (g_server != nullptr) g_server->stop();
}

}  // namespace

int cmd_validate(const std::filesystem::path& path, const Common& opts, std::ostream& out, std::ostream& err) {
    Ontology o;
    try {
        const auto text = read_text_file(path);
        const auto format = opts.format.value_or(sniff_format(text));
        o = assemble_unchecked(format == Format::Owl ? read_owl_document(text) : read_json_document(text));
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, path));
    }

    auto violations = validate(o);
    try {
        check_version_header(o.version);
    } catch (const OntologyError& e) {
        violations.push_back({ViolationKind::InvalidId, NodeId{}, e.what()});
    }

    if (opts.json) {
        Json list = Json::array();
        for (const auto& v : violations) {
            Json j;
            j["kind"] = violation_name(v.kind);
            j["id"] = v.id.value;
            j["detail"] = v.detail;
            list.push_back(std::move(j));
        }
        Json j;
        j["violations"] = std::move(list);
        out << j.dump(2) << "\n";
    } else {
        for (const auto& v : violations) out << violation_name(v.kind) << " n" << v.id.value << ": " << v.detail << "\n";
        if (violations.empty()) out << "valid (" << o.nodes.size() << " nodes)\n";
    }
    return violations.empty() ? kOk : kViolations;
}

int cmd_count(const std::filesystem::path& path, const Common& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto n = count_nodes(load(path, opts));
        if (opts.json) {
            Json j;
            j["N"] = n;
            out << j.dump() << "\n";
        } else {
            out << n << "\n";
        }
        return kOk;
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, path));
    }
}

int cmd_diff(const std::filesystem::path& local_path, const std::filesystem::path& ref_path, const Common& opts,
             std::ostream& out, std::ostream& err) {
    Ontology local, reference;
    try {
        local = load(local_path, opts);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, local_path));
    }
    try {
        reference = load(ref_path, opts);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, ref_path));
    }

    MismatchReport report;
    try {
        report = find_mismatches(local, reference);
    } catch (const OntologyError& e) {
        if (e.code() == ErrorCode::IncompatibleVersions) return fail(err, kIncompatible, e.what());
        throw;
    }
    if (opts.json) {
        out << report_to_json(report).dump(2) << "\n";
    } else {
        print_report_table(report, out);
    }
    return report.mismatched == 0 ? kOk : kMismatch;
}

int cmd_purify(const std::filesystem::path& local_path, const std::filesystem::path& ref_path,
               const std::filesystem::path& out_path, const Common& opts, std::ostream& out, std::ostream& err) {
    Ontology local, reference;
    try {
        local = load(local_path, opts);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, local_path));
    }
    try {
        reference = load(ref_path, opts);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, ref_path));
    }

    PurifyResult result;
    try {
        result = purify(local, reference);
    } catch (const OntologyError& e) {
        if (e.code() == ErrorCode::IncompatibleVersions || e.code() == ErrorCode::RootMismatch)
            return fail(err, kIncompatible, e.what());
        return fail(err, kSelfCheck, e.what());
    }

    const Format out_format = opts.format.value_or(format_for_path(out_path));
    try {
        write_file_atomic(out_path, serialize(result.purified, out_format));
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, e.what());
    }

    // Re-read what was written and diff it against the reference once more.
    MismatchReport check;
    try {
        const Ontology written = load_ontology(out_path, out_format);
        check = find_mismatches(written, reference);
        if (check.mismatched != 0 || !canonically_equal(written, reference))
            return fail(err, kSelfCheck, "purified output still differs from the reference (" +
                                             std::to_string(check.mismatched) + " mismatches)");
    } catch (const OntologyError& e) {
        return fail(err, kSelfCheck, std::string("cannot re-read purified output: ") + e.what());
    }

    if (opts.json) {
        Json j;
        j["patchLog"] = patch_log_to_json(result.log);
        j["initial"] = report_to_json(result.initial);
        j["final"] = report_to_json(check);
        j["iterations"] = result.iterations;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& op : result.log) out << describe(op) << "\n";
        out << result.log.size() << " patches applied in " << result.iterations << " rounds; wrote "
            << out_path.string() << "\n";
        out << "mi = " << check.index.to_string() << "\n";
    }
    return kOk;
}

int cmd_search(const std::filesystem::path& path, const std::optional<std::filesystem::path>& ref_path,
               const std::string& q, const std::optional<std::string>& domain, const Common& opts, std::ostream& out,
               std::ostream& err) {
    Ontology local;
    std::optional<Ontology> reference;
    try {
        local = load(path, opts);
        if (ref_path) reference = load(*ref_path, opts);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, e.what());
    }

    SearchOutcome outcome;
    try {
        outcome = search(local, reference ? &*reference : nullptr, Query::parse(q, domain.value_or(local.domain)));
    } catch (const OntologyError& e) {
        if (e.code() == ErrorCode::IncompatibleVersions) return fail(err, kIncompatible, e.what());
        return fail(err, kBadInput, e.what());
    }

    if (opts.json) {
        out << outcome_to_json(outcome).dump(2) << "\n";
        return kOk;
    }
    std::visit(overloaded{
                   [&](const Hits& hits) {
                       for (const auto& r : hits.results) {
                           out << fixed4(r.score.to_double()).substr(0, 3) << "  n" << r.id.value << "  ";
                           for (std::size_t i = 0; i < r.path.size(); ++i) out << (i ? " > " : "") << r.path[i];
                           if (!r.links.empty()) {
                               out << "  [links:";
                               for (NodeId c : r.links) out << " n" << c.value;
                               out << "]";
                           }
                           out << "\n";
                       }
                   },
                   [&](const NoMatch&) { out << "no match\n"; },
                   [&](const NeedsPurification& n) {
                       out << "Mismatched ontology: " << n.report.mismatched << "/" << n.report.total << " = "
                           << fixed4(n.report.index.to_double()) << "\n";
                   },
               },
               outcome);
    return kOk;
}

int cmd_bench(const std::filesystem::path& path, const BenchConfig& config, const Common& opts, std::ostream& out,
              std::ostream& err) {
    Ontology o;
    try {
        o = load(path, opts);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, path));
    }
    try {
        const BenchRun run = run_bench(o, config);
        out << bench_csv(run.records);
        err << "perfect pages: ontology=" << run.ontology_perfect << " keyword=" << run.keyword_perfect << "\n";
        return kOk;
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, e.what());
    }
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    ServiceConfig config;
    try {
        const auto j = Json::parse(text);
        if (auto it = j.find("snapshot_path"); it != j.end()) config.snapshot_path = it->get<std::string>();
        if (auto it = j.find("reference_path_or_url"); it != j.end() && !it->is_null())
            config.reference_path_or_url = it->get<std::string>();
        if (auto it = j.find("bind_addr"); it != j.end()) config.bind_addr = it->get<std::string>();
        if (auto it = j.find("admin_token_env"); it != j.end()) config.admin_token_env = it->get<std::string>();
        if (auto it = j.find("auto_purify"); it != j.end()) config.auto_purify = it->get<bool>();
        if (auto it = j.find("static_dir"); it != j.end()) config.static_dir = it->get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw OntologyError(ErrorCode::JsonSyntax, e.what(), path.string());
    }
    return config;
}

int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err) {
    std::unique_ptr<Service> service;
    try {
        service = start_service(config, err);
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, error_text(e, config.snapshot_path));
    }

    const auto colon = config.bind_addr.rfind(':');
    if (colon == std::string::npos) return fail(err, kBadInput, "bind_addr must be host:port");
    const std::string host = config.bind_addr.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(config.bind_addr.substr(colon + 1));
    } catch (const std::exception&) {
        return fail(err, kBadInput, "bad port in bind_addr " + config.bind_addr);
    }

    httplib::Server server;
    server.new_task_queue = [] { return new httplib::ThreadPool(32); };
    mount_routes(server, *service);
    if (!config.static_dir.empty() && !server.set_mount_point("/", config.static_dir.string()))
        return fail(err, kBadInput, "static_dir " + config.static_dir.string() + " is not a directory");

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    out << "listening on " << host << ":" << port << "\n" << std::flush;
    const bool ok = server.listen(host, port);
    g_server = nullptr;
    if (!ok && g_stop_requested == 0) return fail(err, kBadInput, "cannot listen on " + config.bind_addr);
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ontology store, mismatch detection, purification and search"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    std::string format_name;
    app.add_option("--format", format_name, "Force the ontology file format")
        ->check(CLI::IsMember({"owl", "json"}));
    app.add_flag("--json", common.json, "Machine-readable JSON output");

    std::string path, ref_path, out_path, query;
    std::optional<std::string> domain;
    std::optional<std::string> search_ref;

    auto* validate_cmd = app.add_subcommand("validate", "List every structural violation in a file");
    validate_cmd->add_option("file", path)->required();

    auto* count_cmd = app.add_subcommand("count", "Print the number of nodes");
    count_cmd->add_option("file", path)->required();

    auto* diff_cmd = app.add_subcommand("diff", "Report mismatched nodes and the mismatching index");
    diff_cmd->add_option("local", path)->required();
    diff_cmd->add_option("reference", ref_path)->required();

    auto* purify_cmd = app.add_subcommand("purify", "Repair a local copy until it matches the reference");
    purify_cmd->add_option("local", path)->required();
    purify_cmd->add_option("reference", ref_path)->required();
    purify_cmd->add_option("--out,-o", out_path, "Where to write the purified ontology")->required();

    auto* search_cmd = app.add_subcommand("search", "Keyword search within the ontology's domain");
    search_cmd->add_option("file", path)->required();
    search_cmd->add_option("--q,-q", query, "Query text")->required();
    search_cmd->add_option("--domain", domain, "Domain to search (defaults to the file's domain)");
    search_cmd->add_option("--reference", search_ref, "Reference ontology for mismatch detection");

    ServiceConfig serve_config;
    std::string config_file;
    std::optional<std::string> snapshot_opt, reference_opt, bind_opt, token_env_opt, static_opt;
    std::optional<bool> auto_purify_opt;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP search and admin service");
    serve_cmd->add_option("--config", config_file, "JSON file with the service configuration keys");
    serve_cmd->add_option("--snapshot_path", snapshot_opt, "Ontology snapshot, loaded at start and persisted");
    serve_cmd->add_option("--reference_path_or_url", reference_opt, "Reference ontology file or http:// URL");
    serve_cmd->add_option("--bind_addr", bind_opt, "host:port (default 127.0.0.1:8080)");
    serve_cmd->add_option("--admin_token_env", token_env_opt, "Environment variable holding the admin token");
    serve_cmd->add_option("--auto_purify", auto_purify_opt, "Purify automatically when search reports a mismatch");
    serve_cmd->add_option("--static_dir", static_opt, "Serve web client assets from this directory");

    BenchConfig bench;
    std::vector<std::string> bench_queries;
    auto* bench_cmd = app.add_subcommand("bench", "Perfect pages over time: ontology engine vs keyword scan");
    bench_cmd->add_option("file", path)->required();
    bench_cmd->add_option("--pages", bench.pages, "Synthetic pages to generate")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--queries", bench.queries, "Queries drawn from node labels")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.seed, "Random seed");
    bench_cmd->add_option("--query", bench_queries, "Query this label instead of drawing queries (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kBadInput;
    }
    if (format_name == "owl") common.format = Format::Owl;
    if (format_name == "json") common.format = Format::Json;

    try {
        if (*validate_cmd) return cmd_validate(path, common, out, err);
        if (*count_cmd) return cmd_count(path, common, out, err);
        if (*diff_cmd) return cmd_diff(path, ref_path, common, out, err);
        if (*purify_cmd) return cmd_purify(path, ref_path, out_path, common, out, err);
        if (*search_cmd) {
            std::optional<std::filesystem::path> ref;
            if (search_ref) ref = *search_ref;
            return cmd_search(path, ref, query, domain, common, out, err);
        }
        if (*bench_cmd) {
            bench.fixed_queries = bench_queries;
            return cmd_bench(path, bench, common, out, err);
        }
        if (*serve_cmd) {
            if (!config_file.empty()) serve_config = load_service_config(config_file);
            if (snapshot_opt) serve_config.snapshot_path = *snapshot_opt;
            if (reference_opt) serve_config.reference_path_or_url = *reference_opt;
            if (bind_opt) serve_config.bind_addr = *bind_opt;
            if (token_env_opt) serve_config.admin_token_env = *token_env_opt;
            if (auto_purify_opt) serve_config.auto_purify = *auto_purify_opt;
            if (static_opt) serve_config.static_dir = *static_opt;
            if (serve_config.snapshot_path.empty()) return fail(err, kBadInput, "serve needs --snapshot_path");
            return cmd_serve(serve_config, out, err);
        }
    } catch (const OntologyError& e) {
        return fail(err, kBadInput, e.what());
    }
    return kBadInput;
}

}  // namespace ontopure::cli
