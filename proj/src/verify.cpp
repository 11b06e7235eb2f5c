#include "psl2lab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "psl2lab/errors.hpp"
#include "psl2lab/maxsub.hpp"
#include "psl2lab/ortho4.hpp"
#include "psl2lab/report.hpp"

namespace psl2lab::verify {

using gengraph::EdgeOracle;
using maxsub::KindTag;
using psl2::GroupIndex;
using psl2::Index;

std::string to_string(Status s) {
    switch (s) {
        case Status::Verified: return "verified";
        case Status::Refuted: return "refuted";
        case Status::Inconclusive: return "inconclusive-budget";
    }
    return "?";
}

int exit_code(Status s) {
    switch (s) {
        case Status::Verified: return 0;
        case Status::Refuted: return 1;
        case Status::Inconclusive: return 3;
    }
    return 1;
}

json Verdict::to_json() const {
    return {{"claim_id", claim_id}, {"params", params},         {"status", verify::to_string(status)},
            {"evidence", evidence}, {"seed", seed},             {"runtime_ms", runtime_ms},
            {"artifact_version", kArtifactVersion}};
}

std::uint64_t theorem_a_bound(std::uint64_t p) { return 129 * (p - 1) / 2 + 2; }
std::uint64_t subfield_lower_bound(std::uint64_t q) { return 2 * (q * q - 1) * (q * q - 1) / (q + 1); }
std::uint64_t remark_size(std::uint64_t p) { return 3 * (p + 1) / 2 + 3; }

namespace {

using Clock = std::chrono::steady_clock;

// A group with its generation test and, when small enough, the full graph.
struct Engine {
    GroupIndex G;
    psl2::GenerationTest test;
    std::optional<gengraph::GeneratingGraph> graph;

    Engine(GroupIndex group, const Options& opt) : G(std::move(group)), test(G, opt.mode, opt.closure_cap_override) {
        if (G.order() <= opt.graph_cap) graph.emplace(gengraph::GeneratingGraph::build(test, opt.graph_cap, opt.threads));
    }
    EdgeOracle edge() const { return graph ? EdgeOracle(*graph) : EdgeOracle(test); }
};

std::unique_ptr<Engine> make_engine(std::uint64_t q, const Options& opt) {
    return std::make_unique<Engine>(GroupIndex::enumerate(q, opt.enumeration_cap), opt);
}

void require_odd_prime(std::uint64_t p, const char* what) {
    if (p < 3 || !ff::is_prime(p)) throw UsageError(std::string(what) + " needs an odd prime, got " + std::to_string(p));
}

std::vector<Index> non_identity(const GroupIndex& G, std::span<const Index> s) {
    std::vector<Index> out;
    for (Index x : s)
        if (x != G.identity()) out.push_back(x);
    return out;
}

void finish(Verdict& v, Clock::time_point start) {
    v.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

json options_json(const Options& opt) {
    return {{"mode", opt.mode == psl2::GenMode::Trace ? "trace" : "closure"},
            {"enumeration_cap", opt.enumeration_cap},
            {"graph_cap", opt.graph_cap},
            {"budget", opt.budget}};
}

}  // namespace

Verdict verify_theorem_a(std::uint32_t p, std::uint64_t trials, const Options& opt) {
    const auto start = Clock::now();
    require_odd_prime(p, "theorem-a");
    Verdict v;
    v.claim_id = "theorem-a";
    v.seed = opt.seed;
    v.params = {{"p", p}, {"trials", trials}, {"options", options_json(opt)}};
    const auto E = make_engine(p, opt);
    const GroupIndex& G = E->G;
    const auto edge = E->edge();
    const std::uint64_t bound = theorem_a_bound(p);
    v.evidence["bound"] = bound;
    v.evidence["group_order"] = G.order();
    bool ok = true;

    const auto inv = gengraph::certify(edge, G.involutions(), opt.threads);
    v.evidence["involution_class"] = {{"size", inv.size()}, {"pairwise", inv.verified_pairwise}, {"maximal", inv.verified_maximal}};
    ok = ok && inv.verified_pairwise && inv.verified_maximal;

    json kinds = json::array();
    for (const auto& k : maxsub::catalogue(G)) {
        for (int c = 0; c < k.class_count; ++c) {
            const auto S = maxsub::construct_maximal(G, k.tag, std::nullopt, c);
            const auto members = non_identity(G, S.elements);
            const bool pairwise = gengraph::is_coclique(edge, members);
            const auto m = gengraph::check_maximal(edge, members, opt.threads);
            json j{{"kind", maxsub::to_string(k.tag)}, {"class", c}, {"order", S.elements.size()},
                   {"coclique", pairwise}, {"maximal_coclique", m.maximal}};
            if (m.extending) j["extending_element"] = *m.extending;
            kinds.push_back(std::move(j));
            // A maximal subgroup that is not a coclique would contradict the subgroup lemma.
            ok = ok && pairwise;
        }
    }
    v.evidence["maximal_subgroups"] = std::move(kinds);

    const auto big = [&](Index i) { return G.order_of(i) > 2; };
    const auto found = gengraph::search_cocliques(edge, trials, opt.seed, big);
    std::map<std::string, std::uint64_t> labels;
    std::uint64_t largest_other = 0;
    json violations = json::array();
    for (const auto& C : found) {
        const auto cls = gengraph::classify(G, C.members);
        const bool subgroup = cls.kind.has_value() ||
                              (cls.equals_closure && maxsub::is_maximal_subgroup(G, psl2::subgroup_closure(G, C.members, G.order()).elements));
        std::string label = cls.label;
        if (subgroup && !cls.kind) label = "subgroup:maximal:" + std::to_string(C.size_with_identity());
        ++labels[label + " size " + std::to_string(C.size_with_identity())];
        if (!subgroup) largest_other = std::max<std::uint64_t>(largest_other, C.size_with_identity());
        if (!subgroup && C.size_with_identity() > bound) {
            violations.push_back(report::coclique_report(G, C, cls.label));
        }
    }
    v.evidence["search"] = {{"trials", trials}, {"outcomes", labels}, {"largest_non_subgroup", largest_other},
                            {"violations", violations.size()}};
    if (!violations.empty()) v.evidence["counterexamples"] = violations;
    v.status = !violations.empty() ? Status::Refuted : (ok ? Status::Verified : Status::Refuted);
    finish(v, start);
    return v;
}

Verdict verify_remark(std::uint32_t p, const Options& opt) {
    const auto start = Clock::now();
    require_odd_prime(p, "remark");
    const auto kinds = maxsub::dickson_kinds(p);
    const bool has_a4 = std::any_of(kinds.begin(), kinds.end(), [](const auto& k) { return k.tag == KindTag::A4; });
    if (!has_a4) throw UsageError("remark needs A4 maximal in PSL2(p); p = " + std::to_string(p) + " fails");
    if ((p + 1) % 3 != 0) throw UsageError("remark needs 3 | p + 1; p = " + std::to_string(p) + " fails");
    Verdict v;
    v.claim_id = "remark";
    v.seed = opt.seed;
    v.params = {{"p", p}, {"options", options_json(opt)}};
    const auto E = make_engine(p, opt);
    const GroupIndex& G = E->G;
    const auto edge = E->edge();

    const Index x = G.elements_of_order(3).front();
    const auto X = psl2::subgroup_closure(G, {x}, G.order()).elements;
    const Index xg[1] = {x};
    const auto N = maxsub::normalizer(G, X, xg);
    std::vector<std::vector<Index>> copies;
    for (auto& H : maxsub::all_instances(G, KindTag::A4)) {
        if (std::binary_search(H.begin(), H.end(), x)) copies.push_back(std::move(H));
    }
    std::set<Index> from_a4, from_n;
    std::uint64_t a4_involution_slots = 0;
    for (const auto& H : copies) {
        for (Index h : H) {
            if (G.order_of(h) == 2) {
                from_a4.insert(h);
                ++a4_involution_slots;
            }
        }
    }
    for (Index n : N)
        if (G.order_of(n) == 2) from_n.insert(n);
    // An involution of N(<x>) central in N commutes with every element of N.
    std::uint64_t central = 0;
    for (Index t : from_n) {
        if (std::all_of(N.begin(), N.end(), [&](Index n) { return G.mul(n, t) == G.mul(t, n); })) ++central;
    }
    std::set<Index> all(from_a4.begin(), from_a4.end());
    all.insert(from_n.begin(), from_n.end());
    for (Index y : X)
        if (y != G.identity()) all.insert(y);
    const std::vector<Index> members(all.begin(), all.end());
    std::vector<Index> overlap;
    std::set_intersection(from_a4.begin(), from_a4.end(), from_n.begin(), from_n.end(), std::back_inserter(overlap));

    const auto C = gengraph::certify(edge, members, opt.threads);
    const std::uint64_t expected = remark_size(p) + (central > 0 ? 1 : 0);
    v.evidence = {{"x", x},
                  {"a4_copies_through_x", copies.size()},
                  {"expected_copies", (p + 1) / 3},
                  {"normalizer_order", N.size()},
                  {"central_involutions_in_normalizer", central},
                  {"inventory",
                   {{"cyclic_x_non_identity", X.size() - 1},
                    {"a4_involutions", from_a4.size()},
                    {"a4_involution_slots", a4_involution_slots},
                    {"normalizer_involutions", from_n.size()},
                    {"overlap", overlap.size()},
                    {"identity_counted", 1}}},
                  {"size", C.size()},
                  {"size_with_identity", C.size_with_identity()},
                  {"expected_size", expected},
                  {"pairwise", C.verified_pairwise},
                  {"maximal", C.verified_maximal},
                  {"witnesses", C.witness_log.size()}};
    const bool ok = C.verified_pairwise && C.verified_maximal && C.size_with_identity() == expected &&
                    copies.size() == (p + 1) / 3;
    v.status = ok ? Status::Verified : Status::Refuted;
    if (!ok) v.evidence["members"] = report::members_json(G, members);
    finish(v, start);
    return v;
}

Verdict verify_geometric(std::uint32_t q, const Options& opt, bool pairwise_only) {
    const auto start = Clock::now();
    if (q <= 3) throw UsageError("geometric needs q > 3");
    require_odd_prime(q, "geometric");
    Verdict v;
    v.claim_id = "geometric";
    v.seed = opt.seed;
    v.params = {{"q", q}, {"pairwise_only", pairwise_only}, {"options", options_json(opt)}};
    const auto iso = ortho4::KLIsomorphism::build(q, opt.enumeration_cap);
    const GroupIndex& G = iso.group();
    psl2::GenerationTest test(G, opt.mode, opt.closure_cap_override);
    const EdgeOracle edge(test);
    const auto C = ortho4::build_geometric_coclique(iso);
    const std::uint64_t expected = std::uint64_t{q} * q * q + q;

    const auto bad_pair = gengraph::generating_pair(edge, C.members);
    v.evidence = {{"group_order", G.order()},
                  {"size", C.size()},
                  {"size_with_identity", C.size_with_identity()},
                  {"expected_size_with_identity", expected},
                  {"parts", C.parts.size()},
                  {"parts_disjoint", C.parts_disjoint},
                  {"census", {{"minus", C.census.minus}, {"plus", C.census.plus}, {"degenerate", C.census.degenerate}}},
                  {"pairwise", !bad_pair}};
    if (bad_pair) v.evidence["generating_pair"] = {bad_pair->first, bad_pair->second};
    bool ok = !bad_pair && C.parts_disjoint && C.size_with_identity() == expected;
    if (!ok) {
        v.status = Status::Refuted;
        finish(v, start);
        return v;
    }
    if (pairwise_only) {
        v.evidence["maximal"] = "unchecked";
        v.status = Status::Inconclusive;
        finish(v, start);
        return v;
    }
    const auto m = gengraph::check_maximal(edge, C.members, opt.threads, opt.budget);
    v.evidence["maximality_tests"] = m.tests;
    if (m.budget_exhausted) {
        v.evidence["maximal"] = "budget exhausted";
        v.status = Status::Inconclusive;
        finish(v, start);
        return v;
    }
    v.evidence["maximal"] = m.maximal;
    v.evidence["witnesses"] = m.witnesses.size();
    if (m.extending) v.evidence["extending_element"] = report::matrix_json(G, *m.extending);

    // Eigenspace profile of every outside element.
    const auto vp = ortho4::v_perp(iso.space(), C.v);
    const auto in = maxsub::membership_mask(G, C.members);
    std::map<std::string, std::uint64_t> profiles;
    std::uint64_t hypothesis_holds = 0, outside = 0;
    for (Index g = 0; g < G.order(); ++g) {
        if (in[g] || g == G.identity()) continue;
        ++outside;
        const auto prof = ortho4::eigen_profile(iso, g, vp);
        if (ortho4::meets_finallem_hypothesis(prof)) ++hypothesis_holds;
        std::string key;
        for (const auto& e : prof) key += "(" + std::to_string(e.dim) + "," + std::to_string(e.dim_in_vperp) + ")";
        ++profiles[key.empty() ? "none" : key];
    }
    v.evidence["finallem"] = {{"outside", outside}, {"hypothesis_holds", hypothesis_holds}, {"profiles", profiles}};
    ok = m.maximal;
    v.status = ok ? Status::Verified : Status::Refuted;
    finish(v, start);
    return v;
}

Verdict verify_subfield(std::uint32_t q, const Options& opt) {
    const auto start = Clock::now();
    require_odd_prime(q, "subfield");
    if (q <= 3) throw UsageError("subfield needs q > 3");
    Verdict v;
    v.claim_id = "subfield";
    v.seed = opt.seed;
    v.params = {{"q", q}, {"q0", q * q}, {"options", options_json(opt)}};
    const auto G = GroupIndex::enumerate(std::uint64_t{q} * q, opt.enumeration_cap);
    psl2::GenerationTest test(G, opt.mode, opt.closure_cap_override);
    const EdgeOracle edge(test);

    // x of order (q + 1)/2 inside the standard PGL_2(q); all such elements lie in PSL_2(q).
    const auto sub = maxsub::construct_maximal(G, KindTag::PSL2qDot2);
    std::optional<Index> x;
    for (Index s : sub.elements) {
        if (G.order_of(s) == (q + 1) / 2) {
            x = s;
            break;
        }
    }
    if (!x) throw InternalError("no element of order (q+1)/2 in the subfield subgroup");
    std::vector<std::vector<Index>> copies;
    for (auto& H : maxsub::all_instances(G, KindTag::PSL2qDot2)) {
        if (std::binary_search(H.begin(), H.end(), *x)) copies.push_back(std::move(H));
    }
    std::set<Index> invs;
    for (const auto& H : copies)
        for (Index h : H)
            if (G.order_of(h) == 2) invs.insert(h);
    const std::vector<Index> involutions(invs.begin(), invs.end());
    std::vector<Index> with_x = involutions;
    for (Index y : psl2::subgroup_closure(G, {*x}, G.order()).elements)
        if (y != G.identity()) with_x.push_back(y);

    const auto bad = gengraph::generating_pair(edge, with_x);
    const std::uint64_t bound = subfield_lower_bound(q);
    v.evidence = {{"x_order", G.order_of(*x)},
                  {"copies_through_x", copies.size()},
                  {"involutions", involutions.size()},
                  {"lower_bound", bound},
                  {"set_with_x_size", with_x.size()},
                  {"pairwise", !bad},
                  {"maximal", "not asserted"}};
    if (bad) v.evidence["generating_pair"] = {bad->first, bad->second};
    // Any coclique through x holds at most this many involutions; counted by
    // uncapped closure so the figure does not rest on the fast path.
    std::uint64_t ceiling = 0;
    for (Index t : G.involutions()) {
        bool capped = false;
        const Index gens[2] = {*x, t};
        if (psl2::closure_size(G, gens, G.order(), &capped) < G.order()) ++ceiling;
    }
    v.evidence["involutions_not_generating_with_x"] = ceiling;
    v.evidence["constructed_set"] = report::members_json(G, involutions);
    v.status = (!bad && involutions.size() >= bound) ? Status::Verified : Status::Refuted;
    finish(v, start);
    return v;
}

Verdict verify_lemmas(std::uint32_t p, const Options& opt, std::uint64_t seeds, std::uint64_t involution_pairs) {
    const auto start = Clock::now();
    require_odd_prime(p, "lemmas");
    Verdict v;
    v.claim_id = "lemmas";
    v.seed = opt.seed;
    v.params = {{"p", p}, {"seeds", seeds}, {"involution_pairs", involution_pairs}, {"options", options_json(opt)}};
    const auto E = make_engine(p, opt);
    const GroupIndex& G = E->G;
    const auto edge = E->edge();
    std::mt19937_64 rng(opt.seed);
    bool ok = true;

    // subgp: every sampled maximal coclique with proper closure is that closure,
    // and the closure is a maximal subgroup.
    {
        const auto found = gengraph::search_cocliques(edge, seeds, rng());
        std::uint64_t proper = 0, violations = 0;
        for (const auto& C : found) {
            const auto closure = psl2::subgroup_closure(G, C.members, G.max_proper_subgroup_order());
            if (closure.capped || closure.elements.size() == G.order()) continue;
            ++proper;
            const bool equal = closure.elements.size() == C.size_with_identity();
            if (!equal || !maxsub::is_maximal_subgroup(G, closure.elements)) ++violations;
        }
        v.evidence["subgp"] = {{"samples", found.size()}, {"proper_closure", proper}, {"violations", violations}};
        ok = ok && violations == 0;
    }

    // uniquemax: elements lying in exactly one maximal subgroup, one or two per order.
    {
        std::vector<std::vector<Index>> every;
        for (const auto& k : maxsub::catalogue(G))
            for (auto& s : maxsub::all_instances(G, k.tag)) every.push_back(std::move(s));
        std::map<std::uint32_t, std::vector<Index>> reps;
        for (Index x = 0; x < G.order(); ++x) {
            if (G.order_of(x) <= 2) continue;
            auto& r = reps[G.order_of(x)];
            if (r.size() >= 2) continue;
            const auto n = std::count_if(every.begin(), every.end(),
                                         [&](const auto& s) { return std::binary_search(s.begin(), s.end(), x); });
            if (n == 1) r.push_back(x);
        }
        json cases = json::array();
        std::uint64_t violations = 0;
        for (const auto& [order, xs] : reps) {
            for (Index x : xs) {
                const auto& M = *std::find_if(every.begin(), every.end(),
                                              [&](const auto& s) { return std::binary_search(s.begin(), s.end(), x); });
                const auto target = non_identity(G, M);
                std::uint64_t equal = 0;
                const Index one[1] = {x};
                for (std::uint64_t s = 0; s < seeds; ++s) {
                    if (gengraph::extend_to_maximal(edge, one, rng()).members == target) ++equal;
                }
                violations += seeds - equal;
                cases.push_back({{"x", x}, {"order", order}, {"subgroup_order", M.size()}, {"equal", equal}, {"runs", seeds}});
            }
        }
        v.evidence["uniquemax"] = {{"cases", cases}, {"violations", violations}};
        ok = ok && violations == 0;
    }

    // main5: maximal cocliques through an element of order p are Borel subgroups.
    {
        const auto unipotent = G.elements_of_order(p);
        std::uint64_t violations = 0;
        std::uniform_int_distribution<std::size_t> pick(0, unipotent.size() - 1);
        for (std::uint64_t s = 0; s < seeds; ++s) {
            const Index one[1] = {unipotent[pick(rng)]};
            const auto C = gengraph::extend_to_maximal(edge, one, rng());
            const auto cls = gengraph::classify(G, C.members);
            if (cls.kind != KindTag::Borel) ++violations;
        }
        v.evidence["main5"] = {{"runs", seeds}, {"violations", violations}};
        ok = ok && violations == 0;
    }

    // Two involutions generate a dihedral group, never G.
    {
        const auto inv = G.involutions();
        std::uniform_int_distribution<std::size_t> pick(0, inv.size() - 1);
        std::uint64_t violations = 0;
        for (std::uint64_t k = 0; k < involution_pairs; ++k) {
            const Index a = inv[pick(rng)], b = inv[pick(rng)];
            if (a == b) continue;
            const auto H = psl2::subgroup_closure(G, {a, b}, G.order());
            const bool dihedral = H.elements.size() == 2 * std::uint64_t{G.order_of(G.mul(a, b))};
            if (edge(a, b) || !dihedral) ++violations;
        }
        v.evidence["involution_pairs"] = {{"pairs", involution_pairs}, {"violations", violations}};
        ok = ok && violations == 0;
    }
    v.status = ok ? Status::Verified : Status::Refuted;
    finish(v, start);
    return v;
}

Verdict verify_iso(std::uint32_t q, const Options& opt, std::uint64_t pairs) {
    const auto start = Clock::now();
    require_odd_prime(q, "iso");
    Verdict v;
    v.claim_id = "iso";
    v.seed = opt.seed;
    v.params = {{"q", q}, {"pairs", pairs}, {"options", options_json(opt)}};
    const auto iso = ortho4::KLIsomorphism::build(q, opt.enumeration_cap);
    const GroupIndex& G = iso.group();
    const auto& Fq = iso.small_field();
    const auto& D = iso.space().gram();
    const ortho4::Mat4 id = ortho4::identity4(Fq);

    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(G.order() - 1));
    std::uint64_t mult_fail = 0, form_fail = 0, det_fail = 0, identity_images = 0;
    for (std::uint64_t k = 0; k < pairs; ++k) {
        const Index a = pick(rng), b = pick(rng);
        if (iso.image(G.mul(a, b)) != ortho4::mul4(Fq, iso.image(a), iso.image(b))) ++mult_fail;
    }
    for (Index i = 0; i < G.order(); ++i) {
        const auto& m = iso.image(i);
        if (ortho4::mul4(Fq, ortho4::transpose4(m), ortho4::mul4(Fq, D, m)) != D) ++form_fail;
        if (ortho4::det4(Fq, m) != Fq.one()) ++det_fail;
        if (m == id) ++identity_images;
    }
    const auto& F2 = iso.big_field();
    const bool minus_identity_trivial = iso.apply(psl2::negate(F2, psl2::identity(F2))) == id;

    // Closure of two seeded images, computed on 4x4 matrices.
    const Index g1 = pick(rng), g2 = pick(rng);
    std::set<Index> seen{G.identity()};
    std::vector<Index> frontier{G.identity()};
    while (!frontier.empty()) {
        std::vector<Index> next;
        for (Index m : frontier) {
            for (Index g : {g1, g2}) {
                const auto prod = ortho4::mul4(Fq, iso.image(m), iso.image(g));
                const auto pre = iso.preimage(prod);
                if (!pre) throw InternalError("image product left the image");
                if (seen.insert(*pre).second) next.push_back(*pre);
            }
        }
        frontier = std::move(next);
    }
    v.evidence = {{"multiplicativity_failures", mult_fail},
                  {"form_failures", form_fail},
                  {"det_failures", det_fail},
                  {"elements_mapping_to_identity", identity_images},
                  {"minus_identity_maps_to_identity", minus_identity_trivial},
                  {"tensor_form_minus_type", ortho4::QuadSpace::from_gram(Fq, iso.tensor_gram()).is_minus_type()},
                  {"generator_closure", seen.size()},
                  {"group_order", G.order()}};
    const bool ok = mult_fail == 0 && form_fail == 0 && det_fail == 0 && identity_images == 1 && minus_identity_trivial &&
                    seen.size() == G.order();
    v.status = ok ? Status::Verified : Status::Refuted;
    finish(v, start);
    return v;
}

}  // namespace psl2lab::verify
