#include "portnet/manifest.hpp"

#include <cstdio>

#include "json_util.hpp"

namespace portnet {

using detail::json;

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    json j;
    j["tool"] = m.tool;
    j["version"] = m.version;
    j["command"] = m.command;
    j["argv"] = m.argv;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["wall_time_s"] = m.wall_time_s;
    detail::write_file_atomic(path, j.dump(1) + "\n");
}

RunManifest load_manifest(const std::filesystem::path& path) {
    const json j = detail::load_json_file(path);
    RunManifest m;
    m.tool = j.value("tool", "");
    m.version = j.value("version", "");
    m.command = j.value("command", "");
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.config_hash = j.value("config_hash", "");
    m.seed = j.value("seed", 0ULL);
    m.inputs = j.at("inputs").get<std::vector<std::string>>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_time_s = j.value("wall_time_s", 0.0);
    return m;
}

} // namespace portnet
