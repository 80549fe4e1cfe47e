#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "ontopure/bench.hpp"
#include "ontopure/owl_io.hpp"
#include "ontopure/service.hpp"

namespace ontopure::cli {

// Exit codes shared by every subcommand.
enum Exit : int {
    kOk = 0,
    kViolations = 1,     // validate found problems
    kBadInput = 2,       // unreadable/unparsable input, unwritable output, bad arguments
    kMismatch = 3,       // diff: mi > 0
    kIncompatible = 4,   // reference declares the local version incompatible
    kSelfCheck = 5,      // purify's re-diff of its own output failed
};

struct Common {
    std::optional<Format> format;  // forces the input/output format; sniffed otherwise
    bool json = false;
};

int cmd_validate(const std::filesystem::path& path, const Common& opts, std::ostream& out, std::ostream& err);
int cmd_count(const std::filesystem::path& path, const Common& opts, std::ostream& out, std::ostream& err);
int cmd_diff(const std::filesystem::path& local, const std::filesystem::path& reference, const Common& opts,
             std::ostream& out, std::ostream& err);
int cmd_purify(const std::filesystem::path& local, const std::filesystem::path& reference,
               const std::filesystem::path& out_path, const Common& opts, std::ostream& out, std::ostream& err);
int cmd_search(const std::filesystem::path& path, const std::optional<std::filesystem::path>& reference,
               const std::string& q, const std::optional<std::string>& domain, const Common& opts, std::ostream& out,
               std::ostream& err);
int cmd_bench(const std::filesystem::path& path, const BenchConfig& config, const Common& opts, std::ostream& out,
              std::ostream& err);
// Blocks until SIGINT/SIGTERM.
int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err);

// Reads the serve configuration keys (snapshot_path, reference_path_or_url,
// bind_addr, admin_token_env, auto_purify) from a JSON object.
ServiceConfig load_service_config(const std::filesystem::path& path);

// Full command line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ontopure::cli
