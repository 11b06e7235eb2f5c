#pragma once

// On-disk cache for group enumerations and generating graphs.
//
// An entry is one JSON header line
//   {"kind", "q", "count", "row_stride", "version", "caps", "checksum"}
// followed by count * row_stride 64-bit words, little-endian.  Graph rows are
// the packed adjacency rows; a group row packs the four 16-bit entry codes of
// one canonical matrix.  Writes go to a temporary file that is then renamed.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psl2lab/errors.hpp"
#include "psl2lab/gengraph.hpp"
#include "psl2lab/psl2.hpp"

namespace psl2lab::cli {

struct CacheKey {
    std::string kind;  // "group" or "graph"
    std::uint64_t q = 0;
    std::uint64_t enumeration_cap = 0;
    std::uint64_t graph_cap = 0;
};

struct CacheEntry {
    std::uint64_t count = 0;
    std::uint64_t row_stride = 0;
    std::vector<std::uint64_t> words;
};

class Cache {
  public:
    // Warnings about corrupt entries go to warn (may be null).
    explicit Cache(std::filesystem::path dir, std::ostream* warn = nullptr);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const CacheKey& key) const;

    // nullopt when absent, written by another version, or under other caps.
    // A corrupt entry is reported, deleted, and treated as absent.
    std::optional<CacheEntry> load(const CacheKey& key, const std::string& version = kArtifactVersion) const;
    void store(const CacheKey& key, const CacheEntry& entry, const std::string& version = kArtifactVersion) const;
    void discard(const CacheKey& key, const std::string& reason) const;
    // Removes every cache entry; returns how many.
    std::size_t clear() const;

  private:
    std::filesystem::path dir_;
    std::ostream* warn_;
};

// Loads from cache when possible; otherwise computes and stores.  cache may be
// null.  hit, when given, reports whether the cache supplied the result.
psl2::GroupIndex cached_group(const Cache* cache, std::uint64_t q, std::uint64_t enumeration_cap, bool* hit = nullptr);
gengraph::GeneratingGraph cached_graph(const Cache* cache, const psl2::GenerationTest& test,
                                       std::uint64_t enumeration_cap, std::uint64_t graph_cap, unsigned threads = 1,
                                       bool* hit = nullptr);

}  // namespace psl2lab::cli
