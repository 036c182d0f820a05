#pragma once

#include "cibn/graph.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cibn {

class GraphFileError : public std::runtime_error {
public:
    GraphFileError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Parsed text graph. Line grammar ('#' starts a comment line):
///
///     node <label> [hidden]
///     <label> <mark> <label>       mark: -> <-> o-> o-o <-o <- -o o-
///     noncollider <a> <b> <c>
///
/// Nodes named by an edge before any declaration are declared observed on first use.
struct GraphFile {
    struct Node {
        std::string label;
        bool hidden = false;
        bool operator==(const Node&) const = default;
    };
    struct Edge {
        std::size_t a;
        std::size_t b;
        EndMark at_a;
        EndMark at_b;
        bool operator==(const Edge&) const = default;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<std::array<std::size_t, 3>> noncolliders;

    bool operator==(const GraphFile&) const = default;
};

GraphFile parse_graph(std::istream& in);
GraphFile parse_graph_text(const std::string& text);
GraphFile read_graph_file(const std::string& path);

/// Requires "->" edges only; hidden flags carry over.
Dag to_dag(const GraphFile& f);
/// Requires no hidden nodes.
MixedGraph to_mixed(const GraphFile& f);

/// Canonical text: node declarations in id order, then edges in ascending pair order,
/// then non-collider triples.
std::string print_graph(const Dag& g);
std::string print_graph(const MixedGraph& g);

/// Graphviz rendering. Tails draw no decoration, arrows a normal head, circles an open dot.
std::string to_dot(const MixedGraph& g, const std::string& name = "G");
std::string to_dot(const Dag& g, const std::string& name = "G");

}  // namespace cibn
