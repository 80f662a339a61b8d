#pragma once

namespace cubicmaps {

inline constexpr const char* library_version = "1.0.0";
inline constexpr int palette_version = 1;

}  // namespace cubicmaps
