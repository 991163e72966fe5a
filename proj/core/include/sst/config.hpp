#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace sst {

// Plain-text "key = value" config with dotted section keys
// (e.g. cluster.grid = 16). Later assignments override earlier ones.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace sst
