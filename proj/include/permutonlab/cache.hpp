#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unistd.h>

namespace permutonlab {

/// Cache directory resolution: explicit flag, then PERMUTON_LAB_CACHE,
/// else disabled.
inline std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return std::filesystem::path(flag_value);
    if (const char* env = std::getenv("PERMUTON_LAB_CACHE"); env && *env)
        return std::filesystem::path(env);
    return std::nullopt;
}

/// Single-writer/multi-reader contract: writers stage into a temp file in
/// the same directory and rename over the target.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            return; // caching is best effort
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

inline std::string sanitize_cache_key(std::string s) {
    for (char& c : s)
        if (c == ',' || c == ';' || c == '/') c = '-';
    return s;
}

} // namespace permutonlab
