#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "cnet/error.hpp"

namespace cnet {

/// Flat key=value configuration. Lines are `section.key=value`; blank lines
/// and lines starting with '#' are ignored; whitespace around keys and
/// values is trimmed. Serialization is canonical (sorted keys), so a config
/// embedded in run output is stable byte-for-byte.
class Config {
public:
    Config() = default;

    static Config from_file(const std::filesystem::path& path);
    static Config from_string(std::string_view text);

    bool has(std::string_view key) const { return kv_.contains(std::string(key)); }

    std::string get(std::string_view key) const;
    std::string get_or(std::string_view key, std::string_view fallback) const;
    double get_double(std::string_view key, double fallback) const;
    std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
    std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;

    void set(std::string_view key, std::string_view value);

    /// Rejects keys outside the allowed set (typo guard).
    void require_known_keys(std::span<const std::string_view> allowed) const;

    std::string serialize() const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace cnet
