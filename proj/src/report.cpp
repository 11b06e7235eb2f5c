#include "psl2lab/report.hpp"

namespace psl2lab::report {

std::string group_name(const psl2::GroupIndex& G) { return "PSL2(" + std::to_string(G.q()) + ")"; }

json matrix_json(const psl2::GroupIndex& G, psl2::Index i) {
    const auto& F = G.field();
    const auto& m = G.element(i);
    auto entry = [&](psl2::Fe x) { return F.degree() == 1 ? json(x.code) : json(F.coeffs(x)); };
    return json::array({json::array({entry(m.a()), entry(m.b())}), json::array({entry(m.c()), entry(m.d())})});
}

json members_json(const psl2::GroupIndex& G, std::span<const psl2::Index> members) {
    json out = json::array();
    for (auto i : members) out.push_back({{"index", i}, {"matrix", matrix_json(G, i)}, {"order", G.order_of(i)}});
    return out;
}

json coclique_report(const psl2::GroupIndex& G, const gengraph::Coclique& C, const std::string& classification) {
    return {{"group", group_name(G)},
            {"size", C.size()},
            {"size_with_identity", C.size_with_identity()},
            {"members", members_json(G, C.members)},
            {"verified", {{"pairwise", C.verified_pairwise}, {"maximal", C.verified_maximal}}},
            {"classification", classification}};
}

json subspace_json(const ortho4::QuadSpace& S, const ortho4::Subspace& U) {
    json basis = json::array();
    for (const auto& v : U.basis) basis.push_back({v[0].code, v[1].code, v[2].code, v[3].code});
    json gram = json::array();
    for (std::size_t i = 0; i < U.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < U.dim(); ++j) row.push_back(U.gram[i * U.dim() + j].code);
        gram.push_back(row);
    }
    json out{{"basis", basis}, {"gram", gram}};
    if (U.dim() == 2) out["type"] = ortho4::to_string(ortho4::classify_2space(S, U));
    return out;
}

json geometric_report(const ortho4::KLIsomorphism& iso, const ortho4::GeometricCoclique& C, bool pairwise,
                      bool maximal) {
    gengraph::Coclique view;
    view.members = C.members;
    view.verified_pairwise = pairwise;
    view.verified_maximal = maximal;
    json out = coclique_report(iso.group(), view, "geometric");
    out["v"] = {C.v[0].code, C.v[1].code, C.v[2].code, C.v[3].code};
    out["census"] = {{"minus", C.census.minus}, {"plus", C.census.plus}, {"degenerate", C.census.degenerate}};
    out["parts_disjoint"] = C.parts_disjoint;
    json parts = json::array();
    for (const auto& p : C.parts) {
        json j = subspace_json(iso.space(), p.U);
        j["elements"] = p.elements;
        parts.push_back(std::move(j));
    }
    out["parts"] = std::move(parts);
    return out;
}

}  // namespace psl2lab::report
