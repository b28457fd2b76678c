#pragma once

namespace portnet {

inline constexpr const char* kVersion = "0.1.0";

} // namespace portnet
