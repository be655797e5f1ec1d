#include "cnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace cnet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    try {
        return from_string(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

Config Config::from_string(std::string_view text) {
    Config cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key=value, got '" + std::string(line) + "'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        cfg.set(key, value);
    }
    return cfg;
}

std::string Config::get(std::string_view key) const {
    const auto it = kv_.find(std::string(key));
    if (it == kv_.end()) throw ConfigError("missing config key '" + std::string(key) + "'");
    return it->second;
}

std::string Config::get_or(std::string_view key, std::string_view fallback) const {
    const auto it = kv_.find(std::string(key));
    return it == kv_.end() ? std::string(fallback) : it->second;
}

double Config::get_double(std::string_view key, double fallback) const {
    const auto it = kv_.find(std::string(key));
    if (it == kv_.end()) return fallback;
    const std::string& s = it->second;
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ConfigError("config key '" + std::string(key) + "': '" + s + "' is not a number");
    }
    return v;
}

std::int64_t Config::get_int(std::string_view key, std::int64_t fallback) const {
    const auto it = kv_.find(std::string(key));
    if (it == kv_.end()) return fallback;
    const std::string& s = it->second;
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ConfigError("config key '" + std::string(key) + "': '" + s + "' is not an integer");
    }
    return v;
}

std::uint64_t Config::get_u64(std::string_view key, std::uint64_t fallback) const {
    const auto it = kv_.find(std::string(key));
    if (it == kv_.end()) return fallback;
    const std::string& s = it->second;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ConfigError("config key '" + std::string(key) + "': '" + s +
                          "' is not an unsigned integer");
    }
    return v;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
    const auto it = kv_.find(std::string(key));
    if (it == kv_.end()) return fallback;
    const std::string& s = it->second;
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("config key '" + std::string(key) + "': '" + s + "' is not a boolean");
}

void Config::set(std::string_view key, std::string_view value) {
    kv_[std::string(key)] = std::string(value);
}

void Config::require_known_keys(std::span<const std::string_view> allowed) const {
    for (const auto& [key, value] : kv_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [key, value] : kv_) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    if (!out.empty()) out.pop_back();
    return out;
}

} // namespace cnet
