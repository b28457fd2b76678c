#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "portnet/errors.hpp"
#include "portnet/manifest.hpp"
#include "portnet/types.hpp"
#include "portnet/version.hpp"

namespace portnet::cli {

using nlohmann::json;

/// Flags shared by every subcommand.
struct GlobalArgs {
    std::uint64_t seed = 0;
    double z0 = 50.0;
    std::string grid;  // lo:hi:points[:log]
    std::string out_dir = ".";
    std::string config_path;
    json config = json::object();
    const CLI::Option* seed_opt = nullptr;

    bool seed_given() const { return seed_opt != nullptr && seed_opt->count() > 0; }
};

void add_global_options(CLI::App* cmd, GlobalArgs& g);

/// "lo:hi:points[:log]" -> grid; empty -> the default 64-point log sweep.
FrequencyGrid parse_grid(const std::string& spec);

/// Applies a --config JSON value when the option was not set on the CLI.
template <typename T>
void config_override(const json& cfg, const CLI::Option* opt, const char* key, T& var) {
    if (cfg.contains(key) && (opt == nullptr || opt->count() == 0)) var = cfg.at(key).get<T>();
}

std::vector<std::string> split_csv_list(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Collects provenance over one command run and writes the manifest at the end.
class ManifestScope {
public:
    ManifestScope(std::string command, const GlobalArgs& g);
    void add_input(const std::filesystem::path& p) { m_.inputs.push_back(p.string()); }
    void add_output(const std::filesystem::path& p) { m_.outputs.push_back(p.string()); }
    /// Writes <primary output>.manifest.json (or the explicit path).
    void finish(const std::filesystem::path& manifest_path);

    static void set_argv(int argc, char** argv);

private:
    RunManifest m_;
    std::chrono::steady_clock::time_point start_;
};

/// Exception -> exit-code policy: 2 for usage/file problems, 1 for domain
/// failures (solver, sampling, training, schema).
int run_guarded(const std::function<void()>& body);

} // namespace portnet::cli
