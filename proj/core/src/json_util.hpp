#pragma once

// Private helpers shared by the serialization translation units.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "portnet/errors.hpp"

namespace portnet::detail {

using nlohmann::json;

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

/// Writes via a temp file + rename so readers never observe a torn file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f << content;
        if (!f) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline json parse_json(const std::string& text, const std::string& context) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("invalid JSON in " + context);
    return j;
}

inline json load_json_file(const std::filesystem::path& path) {
    return parse_json(read_file(path), path.string());
}

} // namespace portnet::detail
