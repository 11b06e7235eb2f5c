#pragma once

// Generating-graph exports.  Vertices are named by group index; every format
// carries the run metadata (parameters, seed, version) somewhere a reader can
// ignore it.

#include <iosfwd>

#include "json.hpp"
#include "psl2lab/config.hpp"
#include "psl2lab/gengraph.hpp"

namespace psl2lab::cli {

void write_dot(std::ostream& out, const gengraph::GeneratingGraph& g, const nlohmann::json& meta);
void write_graphml(std::ostream& out, const gengraph::GeneratingGraph& g, const nlohmann::json& meta);
// {group, q, vertex_count, edge_count, vertices, edges: sorted [a, b] pairs with a < b, meta}
nlohmann::json adjacency_json(const gengraph::GeneratingGraph& g, const nlohmann::json& meta);
// "# <meta>" then "source,target" then one sorted edge per line.
void write_csv(std::ostream& out, const gengraph::GeneratingGraph& g, const nlohmann::json& meta);

void write_graph(std::ostream& out, const gengraph::GeneratingGraph& g, Format format, const nlohmann::json& meta);

}  // namespace psl2lab::cli
