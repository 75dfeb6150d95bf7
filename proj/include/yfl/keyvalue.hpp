#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace yfl {

/// Flat `key = value` text, one entry per line; `#` starts a comment.
/// Keys are kept sorted so that serialization is canonical.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::filesystem::path& path);

    /// Applies a single "key=value" override.
    void apply_override(const std::string& assignment);
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Throws std::invalid_argument naming the first key not in `allowed`.
    void require_known(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

    /// Canonical text form: sorted "key=value" lines.
    std::string to_string() const;

private:
    std::map<std::string, std::string> entries_;
};

double parse_double(const std::string& s, const std::string& what);
long parse_int(const std::string& s, const std::string& what);
std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace yfl
