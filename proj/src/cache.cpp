#include "psl2lab/cache.hpp"

#include <fstream>
#include <iterator>
#include <ostream>
#include <random>

#include "json.hpp"

namespace psl2lab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSuffix = ".p2c";

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<unsigned char> to_le_bytes(std::span<const std::uint64_t> words) {
    std::vector<unsigned char> out(words.size() * 8);
    for (std::size_t i = 0; i < words.size(); ++i)
        for (int b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<unsigned char>(words[i] >> (8 * b));
    return out;
}

json caps_json(const CacheKey& key) { return {{"enumeration_cap", key.enumeration_cap}, {"graph_cap", key.graph_cap}}; }

}  // namespace

Cache::Cache(fs::path dir, std::ostream* warn) : dir_(std::move(dir)), warn_(warn) {}

fs::path Cache::path_for(const CacheKey& key) const {
    return dir_ / (key.kind + "-q" + std::to_string(key.q) + "-e" + std::to_string(key.enumeration_cap) + "-g" +
                   std::to_string(key.graph_cap) + kSuffix);
}

void Cache::discard(const CacheKey& key, const std::string& reason) const {
    if (warn_) *warn_ << "warning: corrupt cache entry " << path_for(key).string() << " (" << reason << "), recomputing\n";
    std::error_code ec;
    fs::remove(path_for(key), ec);
}

std::optional<CacheEntry> Cache::load(const CacheKey& key, const std::string& version) const {
    const fs::path path = path_for(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line)) {
        discard(key, "missing header");
        return std::nullopt;
    }
    json h;
    try {
        h = json::parse(line);
        if (h.at("version").get<std::string>() != version) return std::nullopt;
        if (h.at("kind").get<std::string>() != key.kind || h.at("q").get<std::uint64_t>() != key.q ||
            h.at("caps") != caps_json(key)) {
            discard(key, "header does not match its key");
            return std::nullopt;
        }
    } catch (const json::exception& e) {
        discard(key, std::string("unreadable header: ") + e.what());
        return std::nullopt;
    }
    CacheEntry entry;
    std::uint64_t checksum = 0;
    try {
        entry.count = h.at("count").get<std::uint64_t>();
        entry.row_stride = h.at("row_stride").get<std::uint64_t>();
        checksum = h.at("checksum").get<std::uint64_t>();
    } catch (const json::exception& e) {
        discard(key, std::string("incomplete header: ") + e.what());
        return std::nullopt;
    }
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != entry.count * entry.row_stride * 8) {
        discard(key, "payload length " + std::to_string(bytes.size()) + " does not match header");
        return std::nullopt;
    }
    if (fnv1a(bytes) != checksum) {
        discard(key, "checksum mismatch");
        return std::nullopt;
    }
    entry.words.resize(entry.count * entry.row_stride);
    for (std::size_t i = 0; i < entry.words.size(); ++i) {
        std::uint64_t w = 0;
        for (int b = 0; b < 8; ++b) w |= std::uint64_t{bytes[i * 8 + b]} << (8 * b);
        entry.words[i] = w;
    }
    return entry;
}

void Cache::store(const CacheKey& key, const CacheEntry& entry, const std::string& version) const {
    fs::create_directories(dir_);
    const auto bytes = to_le_bytes(entry.words);
    const json h{{"kind", key.kind},         {"q", key.q},           {"count", entry.count},
                 {"row_stride", entry.row_stride}, {"version", version}, {"caps", caps_json(key)},
                 {"checksum", fnv1a(bytes)}};
    const fs::path path = path_for(key);
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write cache file " + tmp.string());
        out << h.dump() << '\n';
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw UsageError("short write to cache file " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::size_t Cache::clear() const {
    std::size_t n = 0;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return 0;
    for (const auto& e : fs::directory_iterator(dir_)) {
        const auto name = e.path().filename().string();
        if (e.path().extension() == kSuffix || name.find(std::string(kSuffix) + ".tmp") != std::string::npos) {
            fs::remove(e.path());
            ++n;
        }
    }
    return n;
}

psl2::GroupIndex cached_group(const Cache* cache, std::uint64_t q, std::uint64_t enumeration_cap, bool* hit) {
    if (hit) *hit = false;
    const CacheKey key{"group", q, enumeration_cap, 0};
    const bool packable = q <= 0xffff;
    if (cache && packable) {
        if (auto entry = cache->load(key)) {
            try {
                if (entry->row_stride != 1) throw UsageError("group rows must be one word");
                const auto [p, n] = psl2::split_prime_power(q);
                const auto F = ff::Field::build(p, n);
                std::vector<psl2::Mat2> elements(entry->count);
                for (std::size_t i = 0; i < elements.size(); ++i)
                    for (int k = 0; k < 4; ++k)
                        elements[i].e[k] = ff::Fe{static_cast<std::uint32_t>((entry->words[i] >> (16 * k)) & 0xffff)};
                auto G = psl2::GroupIndex::from_elements(F, std::move(elements));
                if (hit) *hit = true;
                return G;
            } catch (const UsageError& e) {
                cache->discard(key, e.what());
            }
        }
    }
    auto G = psl2::GroupIndex::enumerate(q, enumeration_cap);
    if (cache && packable) {
        CacheEntry entry{G.order(), 1, {}};
        entry.words.reserve(G.order());
        for (const auto& m : G.elements()) {
            std::uint64_t w = 0;
            for (int k = 0; k < 4; ++k) w |= std::uint64_t{m.e[k].code} << (16 * k);
            entry.words.push_back(w);
        }
        cache->store(key, entry);
    }
    return G;
}

gengraph::GeneratingGraph cached_graph(const Cache* cache, const psl2::GenerationTest& test,
                                       std::uint64_t enumeration_cap, std::uint64_t graph_cap, unsigned threads,
                                       bool* hit) {
    if (hit) *hit = false;
    const auto& G = test.group();
    if (G.order() > graph_cap)
        throw CapExceeded("generating graph of PSL_2(" + std::to_string(G.q()) + ")", G.order(), graph_cap);
    const CacheKey key{"graph", G.q(), enumeration_cap, graph_cap};
    if (cache) {
        if (auto entry = cache->load(key)) {
            try {
                if (entry->count != G.order()) throw UsageError("row count does not match the group order");
                auto graph = gengraph::GeneratingGraph::from_words(G, std::move(entry->words));
                if (hit) *hit = true;
                return graph;
            } catch (const UsageError& e) {
                cache->discard(key, e.what());
            }
        }
    }
    auto graph = gengraph::GeneratingGraph::build(test, graph_cap, threads);
    if (cache) cache->store(key, CacheEntry{G.order(), graph.words_per_row(), graph.words()});
    return graph;
}

}  // namespace psl2lab::cli
