#include "psl2lab/export.hpp"

#include <ostream>

#include "psl2lab/report.hpp"

namespace psl2lab::cli {

using nlohmann::json;
using psl2::Index;

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

template <class F>
void for_each_vertex(const gengraph::GeneratingGraph& g, F&& f) {
    const auto& G = g.group();
    for (Index i = 0; i < G.order(); ++i)
        if (i != G.identity()) f(i);
}

}  // namespace

void write_dot(std::ostream& out, const gengraph::GeneratingGraph& g, const json& meta) {
    const auto& G = g.group();
    out << "graph \"" << report::group_name(G) << "\" {\n";
    out << "  graph [meta=\"" << dot_escape(meta.dump()) << "\"];\n";
    for_each_vertex(g, [&](Index i) {
        out << "  " << i << " [label=\"" << dot_escape(report::matrix_json(G, i).dump()) << "\", order=" << G.order_of(i)
            << "];\n";
    });
    for (const auto& [a, b] : g.edges()) out << "  " << a << " -- " << b << ";\n";
    out << "}\n";
}

void write_graphml(std::ostream& out, const gengraph::GeneratingGraph& g, const json& meta) {
    const auto& G = g.group();
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
           "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
           "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
           "  <key id=\"meta\" for=\"graph\" attr.name=\"meta\" attr.type=\"string\"/>\n"
           "  <key id=\"index\" for=\"node\" attr.name=\"index\" attr.type=\"int\"/>\n"
           "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
           "  <key id=\"order\" for=\"node\" attr.name=\"order\" attr.type=\"int\"/>\n";
    out << "  <graph id=\"" << xml_escape(report::group_name(G)) << "\" edgedefault=\"undirected\">\n";
    out << "    <data key=\"meta\">" << xml_escape(meta.dump()) << "</data>\n";
    for_each_vertex(g, [&](Index i) {
        out << "    <node id=\"n" << i << "\"><data key=\"index\">" << i << "</data><data key=\"label\">"
            << xml_escape(report::matrix_json(G, i).dump()) << "</data><data key=\"order\">" << G.order_of(i)
            << "</data></node>\n";
    });
    for (const auto& [a, b] : g.edges()) out << "    <edge source=\"n" << a << "\" target=\"n" << b << "\"/>\n";
    out << "  </graph>\n</graphml>\n";
}

json adjacency_json(const gengraph::GeneratingGraph& g, const json& meta) {
    const auto& G = g.group();
    json vertices = json::array();
    for_each_vertex(g, [&](Index i) { vertices.push_back({{"index", i}, {"matrix", report::matrix_json(G, i)}, {"order", G.order_of(i)}}); });
    json edges = json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
    return {{"group", report::group_name(G)},
            {"q", G.q()},
            {"vertex_count", g.vertex_count()},
            {"edge_count", edges.size()},
            {"vertices", std::move(vertices)},
            {"edges", std::move(edges)},
            {"meta", meta}};
}

void write_csv(std::ostream& out, const gengraph::GeneratingGraph& g, const json& meta) {
    out << "# " << meta.dump() << "\n";
    out << "source,target\n";
    for (const auto& [a, b] : g.edges()) out << a << ',' << b << '\n';
}

void write_graph(std::ostream& out, const gengraph::GeneratingGraph& g, Format format, const json& meta) {
    switch (format) {
        case Format::Dot: write_dot(out, g, meta); return;
        case Format::GraphML: write_graphml(out, g, meta); return;
        case Format::Json: out << adjacency_json(g, meta).dump(1) << '\n'; return;
        case Format::Csv: write_csv(out, g, meta); return;
    }
}

}  // namespace psl2lab::cli
