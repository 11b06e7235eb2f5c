#pragma once

// JSON renderings shared by the command line and the verification runs.

#include <span>
#include <string>

#include "json.hpp"
#include "psl2lab/gengraph.hpp"
#include "psl2lab/ortho4.hpp"
#include "psl2lab/psl2.hpp"

namespace psl2lab::report {

using nlohmann::json;

std::string group_name(const psl2::GroupIndex& G);
// [[a, b], [c, d]]; entries are integers over a prime field, coefficient lists otherwise.
json matrix_json(const psl2::GroupIndex& G, psl2::Index i);
json members_json(const psl2::GroupIndex& G, std::span<const psl2::Index> members);

// {group, size, size_with_identity, members, verified, classification}
json coclique_report(const psl2::GroupIndex& G, const gengraph::Coclique& C, const std::string& classification);

json subspace_json(const ortho4::QuadSpace& S, const ortho4::Subspace& U);
json geometric_report(const ortho4::KLIsomorphism& iso, const ortho4::GeometricCoclique& C, bool pairwise = false,
                      bool maximal = false);

}  // namespace psl2lab::report
