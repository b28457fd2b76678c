#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "portnet/twoport.hpp"

namespace portnet {

struct S2pRecord {
    double frequency_hz;
    SMatrix s;
};

/// Renders a Touchstone .s2p document (Hz, real/imaginary, z0 reference).
/// Column order follows the format: S11 S21 S12 S22.
std::string render_s2p(const std::vector<S2pRecord>& records, ReferenceImpedance z0,
                       const std::string& comment = "");

void write_s2p(const std::filesystem::path& path, const std::vector<S2pRecord>& records,
               ReferenceImpedance z0, const std::string& comment = "");

/// Parses .s2p text. Accepts Hz/kHz/MHz/GHz units and RI/MA/DB formats.
std::vector<S2pRecord> parse_s2p(const std::string& text);

std::vector<S2pRecord> read_s2p(const std::filesystem::path& path);

} // namespace portnet
