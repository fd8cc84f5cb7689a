#include "apdyn/config.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace apdyn {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

KvConfig KvConfig::parse_string(const std::string& text, const std::string& origin) {
    KvConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

const std::string& KvConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string KvConfig::get_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long long KvConfig::get_int(const std::string& key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    long long out = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not an integer: '" + v + "'");
    return out;
}

long long KvConfig::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double KvConfig::get_double(const std::string& key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    double out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not a number: '" + v + "'");
    return out;
}

double KvConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::vector<long long> KvConfig::get_int_list(const std::string& key) const {
    const std::string& v = get(key);
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t comma = v.find(',', pos);
        if (comma == std::string::npos) comma = v.size();
        std::string item = trim(v.substr(pos, comma - pos));
        if (!item.empty()) {
            char* end = nullptr;
            long long n = std::strtoll(item.c_str(), &end, 10);
            if (end == item.c_str() || *end != '\0')
                throw ConfigError("config key '" + key + "' has a bad list entry: '" + item + "'");
            out.push_back(n);
        }
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

void KvConfig::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::map<std::string, std::string> KvConfig::section(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    std::string p = prefix + ".";
    for (const auto& [k, v] : values_)
        if (k.rfind(p, 0) == 0) out[k] = v;
    return out;
}

std::string KvConfig::canonical_text() const {
    // std::map already iterates in sorted key order.
    std::string out;
    std::string current_section;
    for (const auto& [k, v] : values_) {
        auto dot = k.find('.');
        std::string section = dot == std::string::npos ? "" : k.substr(0, dot);
        std::string key = dot == std::string::npos ? k : k.substr(dot + 1);
        if (section != current_section) {
            if (!out.empty()) out += "\n";
            out += "[" + section + "]\n";
            current_section = section;
        }
        out += key + " = " + v + "\n";
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace apdyn
