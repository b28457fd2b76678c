#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace portnet {

/// Provenance record written atomically next to every CLI output. Re-running
/// the stored argv reproduces the outputs byte-for-byte (wall time lives
/// only here, never in the outputs).
struct RunManifest {
    std::string tool = "portnet";
    std::string version;
    std::string command;
    std::vector<std::string> argv;
    std::string config_hash;  // fnv1a-64 of the resolved configuration
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
};

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest load_manifest(const std::filesystem::path& path);

} // namespace portnet
