#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace apdyn {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat "key = value" configuration with [section] headers and # comments.
/// Keys are addressed as "section.key". Chosen over nested formats so that
/// configs and golden files diff cleanly.
class KvConfig {
public:
    static KvConfig parse_file(const std::string& path);
    static KvConfig parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::vector<long long> get_int_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    /// All keys under "prefix." as a plain map with the prefix kept.
    std::map<std::string, std::string> section(const std::string& prefix) const;

    /// Canonical text form: sections sorted, keys sorted within a section.
    std::string canonical_text() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// FNV-1a over the bytes; used for the MANIFEST config hash.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace apdyn
