#pragma once

// The generating graph of PSL_2(q) and coclique certification.
//
// Vertices are the non-identity elements, addressed by their group index; the
// identity index is never a vertex and never a coclique member.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psl2lab/maxsub.hpp"
#include "psl2lab/psl2.hpp"

namespace psl2lab::gengraph {

using psl2::GenerationTest;
using psl2::GroupIndex;
using psl2::Index;

inline constexpr std::uint64_t kDefaultGraphCap = 2000;

class GeneratingGraph {
  public:
    static GeneratingGraph build(const GenerationTest& test, std::uint64_t cap = kDefaultGraphCap,
                                 unsigned threads = 1);
    // Rebuilds from packed rows (words_per_row 64-bit words per group element).
    static GeneratingGraph from_words(const GroupIndex& G, std::vector<std::uint64_t> words);

    const GroupIndex& group() const { return *G_; }
    std::size_t vertex_count() const { return G_->order() - 1; }
    std::size_t words_per_row() const { return stride_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool adjacent(Index a, Index b) const { return (words_[a * stride_ + b / 64] >> (b % 64)) & 1u; }
    std::size_t degree(Index a) const;
    std::size_t edge_count() const;
    // Every edge once, as (smaller, larger), sorted.
    std::vector<std::pair<Index, Index>> edges() const;

  private:
    GeneratingGraph(const GroupIndex& G) : G_(&G), stride_((G.order() + 63) / 64) {}

    const GroupIndex* G_;
    std::size_t stride_;
    std::vector<std::uint64_t> words_;
};

// Edge relation of either a prebuilt graph or on-demand generation tests.
class EdgeOracle {
  public:
    explicit EdgeOracle(const GenerationTest& test) : G_(&test.group()), test_(&test) {}
    explicit EdgeOracle(const GeneratingGraph& graph) : G_(&graph.group()), graph_(&graph) {}

    const GroupIndex& group() const { return *G_; }
    bool operator()(Index a, Index b) const { return graph_ ? graph_->adjacent(a, b) : (*test_)(a, b); }

  private:
    const GroupIndex* G_;
    const GenerationTest* test_ = nullptr;
    const GeneratingGraph* graph_ = nullptr;
};

struct Coclique {
    std::vector<Index> members;  // sorted, identity-free
    bool verified_pairwise = false;
    bool verified_maximal = false;
    // (outside element, member generating G with it); complete when verified_maximal.
    std::vector<std::pair<Index, Index>> witness_log;

    std::size_t size() const { return members.size(); }
    // Count with the identity included.
    std::size_t size_with_identity() const { return members.size() + 1; }
};

// Sorts, dedups and checks identity-freeness.  Throws UsageError.
std::vector<Index> normalize_members(const GroupIndex& G, std::span<const Index> members);

// A generating pair among members, if any.
std::optional<std::pair<Index, Index>> generating_pair(const EdgeOracle& edge, std::span<const Index> members);
bool is_coclique(const EdgeOracle& edge, std::span<const Index> members);

struct MaximalityResult {
    bool maximal = false;
    std::vector<std::pair<Index, Index>> witnesses;  // filled only when maximal
    std::optional<Index> extending;                  // an addable element when not maximal
    bool budget_exhausted = false;                   // stopped early; neither verdict holds
    std::uint64_t tests = 0;                         // edge queries spent
};

// For every non-member, non-identity g look for a member h (ascending) with
// <g, h> = G.  Assumes members form a coclique.  budget caps the number of
// edge queries (0 = unlimited).
MaximalityResult check_maximal(const EdgeOracle& edge, std::span<const Index> members, unsigned threads = 1,
                               std::uint64_t budget = 0);

// is_coclique followed by check_maximal.
Coclique certify(const EdgeOracle& edge, std::span<const Index> members, unsigned threads = 1);

// Greedy one-pass extension: candidates in ascending index order, or in a
// seeded shuffle when seed is given.  The pass itself yields the witness log.
Coclique extend_to_maximal(const EdgeOracle& edge, std::span<const Index> start,
                           std::optional<std::uint64_t> seed = std::nullopt);

using StartFilter = std::function<bool(Index)>;

// trials seeded maximal cocliques, each grown from one random start element
// accepted by filter.
std::vector<Coclique> search_cocliques(const EdgeOracle& edge, std::uint64_t trials, std::uint64_t seed,
                                       const StartFilter& filter = {});

struct Classification {
    std::string label;  // "involution-class", "subgroup:<kind>", "subgroup", or "other"
    bool closure_proper = false;
    bool equals_closure = false;  // members plus identity form a subgroup
    std::uint64_t closure_order = 0;
    std::optional<maxsub::KindTag> kind;  // when equal to a maximal subgroup of a catalogue kind
};

Classification classify(const GroupIndex& G, std::span<const Index> members);

}  // namespace psl2lab::gengraph
