#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace vbcent {

// Flat key=value config file: `#` comments and blank lines ignored, keys
// unique. Commands query every key they understand (marking it consumed,
// present or not); check_consumed() then rejects leftovers, so misspelled
// keys fail loudly instead of silently using defaults.
class Config {
public:
    Config() = default;
    static Config load(const std::string& path); // empty path -> empty config

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void check_consumed() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

} // namespace vbcent
