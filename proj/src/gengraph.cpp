#include "psl2lab/gengraph.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <numeric>
#include <random>
#include <thread>

#include "psl2lab/errors.hpp"

namespace psl2lab::gengraph {

namespace {

// Runs body(i) for i in [0, n) over up to threads workers, in contiguous blocks.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t block = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * block, hi = std::min(n, lo + block);
        pool.emplace_back([=, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

GeneratingGraph GeneratingGraph::build(const GenerationTest& test, std::uint64_t cap, unsigned threads) {
    const GroupIndex& G = test.group();
    if (G.order() > cap) throw CapExceeded("generating graph of PSL_2(" + std::to_string(G.q()) + ")", G.order(), cap);
    GeneratingGraph graph(G);
    const std::size_t n = G.order();
    graph.words_.assign(n * graph.stride_, 0);
    const Index id = G.identity();
    // Each worker fills the upper triangle of its own rows; mirrored afterwards.
    parallel_for(n, threads, [&](std::size_t i) {
        if (i == id) return;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == id) continue;
            if (test(static_cast<Index>(i), static_cast<Index>(j))) graph.words_[i * graph.stride_ + j / 64] |= 1ull << (j % 64);
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (graph.adjacent(static_cast<Index>(i), static_cast<Index>(j))) {
                graph.words_[j * graph.stride_ + i / 64] |= 1ull << (i % 64);
            }
        }
    }
    return graph;
}

GeneratingGraph GeneratingGraph::from_words(const GroupIndex& G, std::vector<std::uint64_t> words) {
    GeneratingGraph graph(G);
    if (words.size() != G.order() * graph.stride_) throw UsageError("adjacency rows have the wrong size");
    graph.words_ = std::move(words);
    const std::size_t n = G.order();
    const Index id = G.identity();
    for (std::size_t i = 0; i < n; ++i) {
        if (graph.adjacent(static_cast<Index>(i), static_cast<Index>(i))) throw UsageError("adjacency has a self-loop");
        if (graph.adjacent(static_cast<Index>(i), id)) throw UsageError("adjacency touches the identity");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (graph.adjacent(static_cast<Index>(i), static_cast<Index>(j)) !=
                graph.adjacent(static_cast<Index>(j), static_cast<Index>(i))) {
                throw UsageError("adjacency is not symmetric");
            }
        }
        // padding bits past the last element must be clear
        const std::size_t tail = n % 64;
        if (tail != 0 && (graph.words_[i * graph.stride_ + graph.stride_ - 1] >> tail) != 0) {
            throw UsageError("adjacency has stray padding bits");
        }
    }
    return graph;
}

std::size_t GeneratingGraph::degree(Index a) const {
    std::size_t d = 0;
    for (std::size_t w = 0; w < stride_; ++w) d += std::popcount(words_[a * stride_ + w]);
    return d;
}

std::size_t GeneratingGraph::edge_count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total / 2;
}

std::vector<std::pair<Index, Index>> GeneratingGraph::edges() const {
    std::vector<std::pair<Index, Index>> out;
    const std::size_t n = G_->order();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacent(static_cast<Index>(i), static_cast<Index>(j))) {
                out.emplace_back(static_cast<Index>(i), static_cast<Index>(j));
            }
        }
    }
    return out;
}

std::vector<Index> normalize_members(const GroupIndex& G, std::span<const Index> members) {
    std::vector<Index> out(members.begin(), members.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (Index m : out) {
        if (m >= G.order()) throw UsageError("element index " + std::to_string(m) + " out of range");
        if (m == G.identity()) throw UsageError("the identity is not a vertex of the generating graph");
    }
    return out;
}

std::optional<std::pair<Index, Index>> generating_pair(const EdgeOracle& edge, std::span<const Index> members) {
    const auto S = normalize_members(edge.group(), members);
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = i + 1; j < S.size(); ++j) {
            if (edge(S[i], S[j])) return std::pair{S[i], S[j]};
        }
    }
    return std::nullopt;
}

bool is_coclique(const EdgeOracle& edge, std::span<const Index> members) {
    if (members.empty()) throw UsageError("empty coclique");
    return !generating_pair(edge, members);
}

MaximalityResult check_maximal(const EdgeOracle& edge, std::span<const Index> members, unsigned threads,
                               std::uint64_t budget) {
    const GroupIndex& G = edge.group();
    const auto S = normalize_members(G, members);
    const auto in = maxsub::membership_mask(G, S);
    const std::size_t n = G.order();
    constexpr Index kNone = ~Index{0};
    std::vector<Index> witness(n, kNone);
    std::atomic<std::uint64_t> spent{0};
    std::atomic<bool> stop{false};
    parallel_for(n, threads, [&](std::size_t i) {
        if (in[i] || i == G.identity() || stop.load(std::memory_order_relaxed)) return;
        for (Index h : S) {
            if (budget != 0 && spent.fetch_add(1, std::memory_order_relaxed) >= budget) {
                stop = true;
                return;
            }
            if (budget == 0) spent.fetch_add(1, std::memory_order_relaxed);
            if (edge(static_cast<Index>(i), h)) {
                witness[i] = h;
                return;
            }
        }
    });
    MaximalityResult r;
    r.tests = std::min<std::uint64_t>(spent.load(), budget == 0 ? spent.load() : budget);
    if (stop) {
        r.budget_exhausted = true;
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (in[i] || i == G.identity()) continue;
        if (witness[i] == kNone) {
            r.extending = static_cast<Index>(i);
            r.witnesses.clear();
            return r;
        }
        r.witnesses.emplace_back(static_cast<Index>(i), witness[i]);
    }
    r.maximal = true;
    return r;
}

Coclique certify(const EdgeOracle& edge, std::span<const Index> members, unsigned threads) {
    Coclique C;
    C.members = normalize_members(edge.group(), members);
    C.verified_pairwise = is_coclique(edge, C.members);
    if (!C.verified_pairwise) return C;
    auto m = check_maximal(edge, C.members, threads);
    C.verified_maximal = m.maximal;
    C.witness_log = std::move(m.witnesses);
    return C;
}

Coclique extend_to_maximal(const EdgeOracle& edge, std::span<const Index> start, std::optional<std::uint64_t> seed) {
    const GroupIndex& G = edge.group();
    Coclique C;
    C.members = normalize_members(G, start);
    if (!is_coclique(edge, C.members)) throw UsageError("starting set is not a coclique");
    auto in = maxsub::membership_mask(G, C.members);

    std::vector<Index> order(G.order());
    std::iota(order.begin(), order.end(), Index{0});
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    // Members are kept in insertion order here so that witnesses are found
    // against the earliest member; sorted at the end.
    std::vector<Index> members = C.members;
    std::vector<std::pair<Index, Index>> rejected;
    for (Index g : order) {
        if (in[g] || g == G.identity()) continue;
        std::optional<Index> w;
        for (Index h : members) {
            if (edge(g, h)) {
                w = h;
                break;
            }
        }
        if (w) {
            rejected.emplace_back(g, *w);
        } else {
            members.push_back(g);
            in[g] = 1;
        }
    }
    // A rejected element generates with a member that is never removed, so
    // the pass is a complete maximality certificate.
    std::sort(members.begin(), members.end());
    std::sort(rejected.begin(), rejected.end());
    C.members = std::move(members);
    C.witness_log = std::move(rejected);
    C.verified_pairwise = true;
    C.verified_maximal = true;
    return C;
}

std::vector<Coclique> search_cocliques(const EdgeOracle& edge, std::uint64_t trials, std::uint64_t seed,
                                       const StartFilter& filter) {
    if (trials == 0) throw UsageError("search_cocliques needs at least one trial");
    const GroupIndex& G = edge.group();
    std::vector<Index> starts;
    for (Index i = 0; i < G.order(); ++i) {
        if (i != G.identity() && (!filter || filter(i))) starts.push_back(i);
    }
    if (starts.empty()) throw UsageError("no element passes the start filter");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
    std::vector<Coclique> out;
    out.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Index s = starts[pick(rng)];
        const std::uint64_t trial_seed = rng();
        const Index one[1] = {s};
        out.push_back(extend_to_maximal(edge, one, trial_seed));
    }
    return out;
}

Classification classify(const GroupIndex& G, std::span<const Index> members) {
    const auto S = normalize_members(G, members);
    Classification c;
    const auto invs = G.involutions();
    if (std::equal(S.begin(), S.end(), invs.begin(), invs.end())) {
        c.label = "involution-class";
        c.closure_order = G.order();  // involutions generate the simple group
        return c;
    }
    const auto closure = psl2::subgroup_closure(G, S, G.max_proper_subgroup_order());
    c.closure_proper = !closure.capped && closure.elements.size() < G.order();
    c.closure_order = closure.capped ? 0 : closure.elements.size();
    c.equals_closure = c.closure_proper && closure.elements.size() == S.size() + 1;
    if (!c.equals_closure) {
        c.label = "other";
        return c;
    }
    c.label = "subgroup";
    for (const auto& k : maxsub::catalogue(G)) {
        if (maxsub::theoretical_order(k.tag, G.q()) != closure.elements.size()) continue;
        for (int cls = 0; cls < k.class_count; ++cls) {
            const auto H = maxsub::construct_maximal(G, k.tag, std::nullopt, cls);
            // Only conjugates containing the first member can match.
            const auto mask = maxsub::membership_mask(G, H.elements);
            for (Index g = 0; g < G.order(); ++g) {
                if (!mask[G.conj(G.inv(g), S.front())]) continue;
                if (maxsub::conjugate_set(G, g, H.elements) == closure.elements) {
                    c.kind = k.tag;
                    c.label = "subgroup:" + maxsub::to_string(k.tag);
                    return c;
                }
            }
        }
    }
    return c;
}

}  // namespace psl2lab::gengraph
