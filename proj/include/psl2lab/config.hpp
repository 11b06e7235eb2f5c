#pragma once

// Run configuration shared by every subcommand.
//
// Precedence, lowest first: built-in defaults, the key=value config file, the
// PSL2LAB_CACHE_DIR environment variable (cache_dir only), command-line flags.

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "psl2lab/gengraph.hpp"
#include "psl2lab/psl2.hpp"

namespace psl2lab::cli {

inline constexpr const char* kCacheDirEnv = "PSL2LAB_CACHE_DIR";

enum class Format { Json, Dot, GraphML, Csv };
std::string to_string(Format f);
Format format_from_string(const std::string& s);  // throws UsageError

psl2::GenMode mode_from_string(const std::string& s);  // "trace" or "closure"

struct RunConfig {
    std::uint64_t enumeration_cap = psl2::kDefaultEnumerationCap;
    std::uint64_t graph_cap = gengraph::kDefaultGraphCap;
    std::uint64_t closure_cap_override = 0;  // 0 = the group's largest proper subgroup order
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;  // maximality edge-query budget, 0 = unlimited
    std::filesystem::path cache_dir = ".psl2lab-cache";
    bool use_cache = true;
    Format format = Format::Json;
    psl2::GenMode mode = psl2::GenMode::Trace;
    unsigned threads = 1;

    void validate() const;  // throws UsageError
    nlohmann::json to_json() const;
};

// Sets one key from text; unknown keys and malformed values throw UsageError.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Lines are "key = value"; blank lines and lines starting with '#' are skipped.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "config");
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
void apply_environment(RunConfig& cfg);

}  // namespace psl2lab::cli
