#pragma once

// File output: atomic writes, 17-significant-digit formatting, binary PGM.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cubicmaps {

/// Round-trippable text for a double, 17 significant digits.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Writes to `<path>.tmp` and renames over `path`, so readers never see a
/// partially written file.
inline void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
    }
}

/// Binary PGM: "P5\n<w> <h>\n255\n" then w*h bytes, row-major, top row first.
inline std::string pgm_bytes(int width, int height, const std::vector<std::uint8_t>& pixels) {
    if (pixels.size() != static_cast<std::size_t>(width) * height) {
        throw std::invalid_argument("pgm_bytes: pixel count does not match dimensions");
    }
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    return out;
}

/// JSON text with doubles printed at 17 significant digits.
inline std::string json_text(const nlohmann::json& j, int indent = 2);

namespace detail {

inline void dump_json(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad = indent >= 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string pad_close = indent >= 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent >= 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + nlohmann::json(it.key()).dump() + (indent >= 0 ? ": " : ":");
                dump_json(it.value(), out, indent, depth + 1);
            }
            out += nl + pad_close + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // numbers stay on one line; records get one line each
            const bool nested = indent >= 0 && std::any_of(j.begin(), j.end(), [](const nlohmann::json& v) {
                                    return v.is_object() && !v.empty();
                                });
            out += "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += nested ? "," : (indent >= 0 ? ", " : ",");
                first = false;
                if (nested) {
                    out += nl + pad;
                    dump_json(v, out, indent, depth + 1);
                } else {
                    dump_json(v, out, -1, 0);
                }
            }
            out += nested ? nl + pad_close + "]" : "]";
            return;
        }
        default: out += j.dump(); return;
    }
}

}  // namespace detail

inline std::string json_text(const nlohmann::json& j, int indent) {
    std::string out;
    detail::dump_json(j, out, indent, 0);
    out += "\n";
    return out;
}

}  // namespace cubicmaps
