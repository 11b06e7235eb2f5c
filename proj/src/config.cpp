#include "psl2lab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "psl2lab/errors.hpp"

namespace psl2lab::cli {

std::string to_string(Format f) {
    switch (f) {
        case Format::Json: return "json";
        case Format::Dot: return "dot";
        case Format::GraphML: return "graphml";
        case Format::Csv: return "csv";
    }
    return "?";
}

Format format_from_string(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "dot") return Format::Dot;
    if (s == "graphml") return Format::GraphML;
    if (s == "csv") return Format::Csv;
    throw UsageError("unknown format '" + s + "' (json, dot, graphml, csv)");
}

psl2::GenMode mode_from_string(const std::string& s) {
    if (s == "trace") return psl2::GenMode::Trace;
    if (s == "closure") return psl2::GenMode::Closure;
    throw UsageError("unknown generation mode '" + s + "' (trace, closure)");
}

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size() || value.front() == '-')
        throw UsageError(key + ": expected a non-negative integer, got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "off" || value == "no") return false;
    throw UsageError(key + ": expected a boolean, got '" + value + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::validate() const {
    if (enumeration_cap == 0) throw UsageError("enumeration-cap must be positive");
    if (graph_cap == 0) throw UsageError("graph-cap must be positive");
    if (threads == 0) throw UsageError("threads must be positive");
}

nlohmann::json RunConfig::to_json() const {
    return {{"enumeration_cap", enumeration_cap},
            {"graph_cap", graph_cap},
            {"closure_cap_override", closure_cap_override},
            {"seed", seed},
            {"budget", budget},
            {"threads", threads},
            {"mode", mode == psl2::GenMode::Trace ? "trace" : "closure"}};
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "enumeration-cap") cfg.enumeration_cap = parse_u64(key, value);
    else if (key == "graph-cap") cfg.graph_cap = parse_u64(key, value);
    else if (key == "closure-cap") cfg.closure_cap_override = parse_u64(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "budget") cfg.budget = parse_u64(key, value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "cache-dir") cfg.cache_dir = value;
    else if (key == "cache") cfg.use_cache = parse_bool(key, value);
    else if (key == "format") cfg.format = format_from_string(value);
    else if (key == "mode") cfg.mode = mode_from_string(value);
    else throw UsageError("unknown configuration key '" + key + "'");
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw UsageError(origin + ":" + std::to_string(n) + ": expected key = value");
        try {
            set_key(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        } catch (const UsageError& e) {
            throw UsageError(origin + ":" + std::to_string(n) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str(), path.string());
}

void apply_environment(RunConfig& cfg) {
    if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) cfg.cache_dir = dir;
}

}  // namespace psl2lab::cli
