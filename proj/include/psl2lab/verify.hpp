#pragma once

// Claim-level verification runs.  Each returns a Verdict whose JSON form is
// {claim_id, params, status, evidence, seed, runtime_ms, artifact_version}.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "psl2lab/gengraph.hpp"
#include "psl2lab/psl2.hpp"

namespace psl2lab::verify {

using nlohmann::json;

enum class Status { Verified, Refuted, Inconclusive };
std::string to_string(Status s);
// 0 verified, 1 refuted, 3 inconclusive (budget)
int exit_code(Status s);

struct Verdict {
    std::string claim_id;
    json params = json::object();
    Status status = Status::Verified;
    json evidence = json::object();
    std::uint64_t seed = 0;
    double runtime_ms = 0;

    json to_json() const;
};

struct Options {
    std::uint64_t enumeration_cap = psl2::kDefaultEnumerationCap;
    std::uint64_t graph_cap = gengraph::kDefaultGraphCap;
    std::uint64_t closure_cap_override = 0;
    psl2::GenMode mode = psl2::GenMode::Trace;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    // Edge-query budget for maximality checks; 0 = unlimited.
    std::uint64_t budget = 0;
};

// 129(p - 1)/2 + 2 for odd p.
std::uint64_t theorem_a_bound(std::uint64_t p);
// 2(q0 - 1)(q^2 - 1)/(q + 1) with q0 = q^2.
std::uint64_t subfield_lower_bound(std::uint64_t q);
// 3(p + 1)/2 + 3.
std::uint64_t remark_size(std::uint64_t p);

Verdict verify_theorem_a(std::uint32_t p, std::uint64_t trials, const Options& opt = {});
Verdict verify_remark(std::uint32_t p, const Options& opt = {});
// pairwise_only skips the maximality search and reports inconclusive-budget.
Verdict verify_geometric(std::uint32_t q, const Options& opt = {}, bool pairwise_only = false);
Verdict verify_subfield(std::uint32_t q, const Options& opt = {});
Verdict verify_lemmas(std::uint32_t p, const Options& opt = {}, std::uint64_t seeds = 200,
                      std::uint64_t involution_pairs = 1000);
Verdict verify_iso(std::uint32_t q, const Options& opt = {}, std::uint64_t pairs = 1000);

}  // namespace psl2lab::verify
