#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "suppflow/flow.hpp"
#include "suppflow/functionals.hpp"

namespace suppflow {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Flat key-value store in file order; keys use dots for nesting
// (e.g. "forcing.alpha"). Lookups throw std::invalid_argument naming the key.
struct KeyValues {
    std::vector<std::pair<std::string, std::string>> items;

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma-separated
    void set(const std::string& key, const std::string& value);
};

// Lines of "key = value"; '#' starts a comment; blank lines ignored.
// Throws std::invalid_argument with the 1-based line number of any fault.
KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::string& path);

// Keys sorted, values verbatim; the canonical form fed to the hash.
std::string canonical_text(const KeyValues& kv);
std::uint64_t config_hash(const KeyValues& kv);  // FNV-1a over canonical_text

// "# artifact <version>\n# config_hash <hex>\n" prefix for every output file.
std::string artifact_header(const KeyValues& kv);

// Shortest round-trip decimal formatting used by all writers.
std::string format_double(double v);

CurvatureSpec curvature_from(const KeyValues& kv);    // curvature.* keys
ForcingSpec forcing_from(const KeyValues& kv);        // forcing.* keys
BodyRecipe body_recipe_from(const KeyValues& kv, const std::string& prefix = "body");
OrliczFunction orlicz_from(const KeyValues& kv, const std::string& prefix);
FlowConfig flow_config_from(const KeyValues& kv);     // flow.* plus the above

}  // namespace suppflow
