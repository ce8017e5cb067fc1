#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "regraph/errors.hpp"

namespace regraph {

enum class GraphMode { simple, multigraph };

// A d-regular graph stored as an undirected edge list plus a canonical
// directed-edge indexing: undirected edge k yields directed edges 2k and
// 2k+1, which are mutual reversals. The reversal map is therefore pure
// index arithmetic (e ^ 1). A loop contributes its two orientations as the
// pair (2k, 2k+1) and counts twice toward its vertex degree.
class RegularGraph {
public:
    using Edge = std::pair<int, int>;

    static RegularGraph build(int vertex_count, const std::vector<Edge>& edges,
                              GraphMode mode = GraphMode::simple) {
        RegularGraph g;
        g.vertex_count_ = vertex_count;
        g.edges_ = edges;
        g.mode_ = mode;
        g.validate_and_index();
        return g;
    }

    int vertex_count() const { return vertex_count_; }
    int degree() const { return degree_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int directed_edge_count() const { return 2 * edge_count(); }
    GraphMode mode() const { return mode_; }
    bool is_multigraph_mode() const { return mode_ == GraphMode::multigraph; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Origin and terminus of directed edge e: edge 2k points i->j for the
    // stored pair (i,j), edge 2k+1 points j->i.
    int origin(int e) const {
        const Edge& b = edges_[e >> 1];
        return (e & 1) ? b.second : b.first;
    }
    int terminus(int e) const {
        const Edge& b = edges_[e >> 1];
        return (e & 1) ? b.first : b.second;
    }
    static int reversal(int e) { return e ^ 1; }

    // Directed edges leaving each vertex (o(e) == v), in index order.
    const std::vector<std::vector<int>>& out_edges() const { return out_edges_; }

    bool is_connected() const {
        if (vertex_count_ == 0) return false;
        std::vector<char> seen(vertex_count_, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int e : out_edges_[v]) {
                int u = terminus(e);
                if (!seen[u]) {
                    seen[u] = 1;
                    ++reached;
                    q.push(u);
                }
            }
        }
        return reached == vertex_count_;
    }

    bool is_bipartite() const {
        std::vector<int> color(vertex_count_, -1);
        for (int s = 0; s < vertex_count_; ++s) {
            if (color[s] != -1) continue;
            color[s] = 0;
            std::queue<int> q;
            q.push(s);
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int e : out_edges_[v]) {
                    int u = terminus(e);
                    if (u == v) return false;  // loop
                    if (color[u] == -1) {
                        color[u] = 1 - color[v];
                        q.push(u);
                    } else if (color[u] == color[v]) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    // Plain-text format: line 1 "V d mode", then one line "i j [multiplicity]"
    // per undirected edge. Edge order defines the directed-edge indexing, so a
    // round-trip reproduces the graph bit-for-bit.
    void write(std::ostream& os) const {
        os << vertex_count_ << ' ' << degree_ << ' '
           << (mode_ == GraphMode::simple ? "simple" : "multigraph") << '\n';
        // Collapse runs of identical edges into a multiplicity column.
        for (std::size_t k = 0; k < edges_.size();) {
            std::size_t run = 1;
            while (k + run < edges_.size() && edges_[k + run] == edges_[k]) ++run;
            os << edges_[k].first << ' ' << edges_[k].second;
            if (run > 1) os << ' ' << run;
            os << '\n';
            k += run;
        }
    }

    void save(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw Error(errc::io_error, "cannot open for writing: " + path);
        write(os);
    }

    static RegularGraph read(std::istream& is) {
        std::string line;
        if (!std::getline(is, line)) throw Error(errc::io_error, "empty graph file");
        std::istringstream head(line);
        int V = 0, d = 0;
        std::string mode_str;
        if (!(head >> V >> d >> mode_str))
            throw Error(errc::io_error, "bad header, expected 'V d mode'");
        GraphMode mode;
        if (mode_str == "simple")
            mode = GraphMode::simple;
        else if (mode_str == "multigraph" || mode_str == "multi")
            mode = GraphMode::multigraph;
        else
            throw Error(errc::io_error, "unknown mode '" + mode_str + "'");
        std::vector<Edge> edges;
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            int i, j;
            if (!(ls >> i >> j)) {
                if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
                throw Error(errc::io_error, "bad edge line: " + line);
            }
            long mult = 1;
            ls >> mult;
            for (long m = 0; m < mult; ++m) edges.emplace_back(i, j);
        }
        RegularGraph g = build(V, edges, mode);
        if (g.degree() != d)
            throw Error(errc::non_regular, "header degree " + std::to_string(d) +
                                               " but graph is " + std::to_string(g.degree()) +
                                               "-regular");
        return g;
    }

    static RegularGraph load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw Error(errc::io_error, "cannot open: " + path);
        return read(is);
    }

    bool operator==(const RegularGraph& o) const {
        return vertex_count_ == o.vertex_count_ && edges_ == o.edges_ && mode_ == o.mode_;
    }

private:
    void validate_and_index() {
        if (vertex_count_ <= 0) throw Error(errc::bad_input, "vertex count must be positive");
        std::vector<int> deg(vertex_count_, 0);
        for (const Edge& b : edges_) {
            if (b.first < 0 || b.first >= vertex_count_ || b.second < 0 ||
                b.second >= vertex_count_)
                throw Error(errc::bad_input, "edge endpoint out of range");
            deg[b.first] += 1;
            deg[b.second] += 1;  // loops count twice
        }
        if (mode_ == GraphMode::simple) {
            std::map<Edge, int> seen;
            for (const Edge& b : edges_) {
                if (b.first == b.second)
                    throw Error(errc::illegal_simple, "loop at vertex " +
                                                          std::to_string(b.first) +
                                                          " in simple mode");
                Edge key{std::min(b.first, b.second), std::max(b.first, b.second)};
                if (++seen[key] > 1)
                    throw Error(errc::illegal_simple,
                                "parallel edge (" + std::to_string(key.first) + "," +
                                    std::to_string(key.second) + ") in simple mode");
            }
        }
        degree_ = deg.empty() ? 0 : deg[0];
        for (int v = 0; v < vertex_count_; ++v) {
            if (deg[v] != degree_)
                throw Error(errc::non_regular,
                            "vertex " + std::to_string(v) + " has degree " +
                                std::to_string(deg[v]) + ", expected " + std::to_string(degree_));
        }
        if (degree_ < 3)
            throw Error(errc::non_regular,
                        "degree must be >= 3, got " + std::to_string(degree_));
        if ((static_cast<long long>(degree_) * vertex_count_) % 2 != 0)
            throw Error(errc::odd_product, "d*V must be even");
        out_edges_.assign(vertex_count_, {});
        for (int e = 0; e < directed_edge_count(); ++e) out_edges_[origin(e)].push_back(e);
    }

    int vertex_count_ = 0;
    int degree_ = 0;
    GraphMode mode_ = GraphMode::simple;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_edges_;
};

// One phase per undirected edge, applied antisymmetrically to the two
// directions: phi of directed edge 2k is +phase[k], of 2k+1 is -phase[k].
struct MagneticDecoration {
    int edge_count = 0;
    std::vector<double> phase;  // per undirected edge, in [0, 2pi)

    double directed_phase(int e) const { return (e & 1) ? -phase[e >> 1] : phase[e >> 1]; }

    void check(const RegularGraph& g) const {
        if (edge_count != g.edge_count() || static_cast<int>(phase.size()) != edge_count)
            throw Error(errc::decoration_mismatch, "magnetic decoration built for another graph");
    }
};

// One symmetric weight per undirected edge, |W| <= 1.
struct WeightDecoration {
    int edge_count = 0;
    std::vector<double> weight;  // per undirected edge, in [-1, 1]

    double directed_weight(int e) const { return weight[e >> 1]; }

    void check(const RegularGraph& g) const {
        if (edge_count != g.edge_count() || static_cast<int>(weight.size()) != edge_count)
            throw Error(errc::decoration_mismatch, "weight decoration built for another graph");
    }
};

// -- named graphs used throughout the tests and CLI demos --------------------

inline RegularGraph complete_graph(int n) {
    std::vector<RegularGraph::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return RegularGraph::build(n, edges);
}

inline RegularGraph complete_bipartite(int m, int n) {
    std::vector<RegularGraph::Edge> edges;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) edges.emplace_back(i, m + j);
    return RegularGraph::build(m + n, edges);
}

// Petersen graph: outer 5-cycle 0..4, inner pentagram 5..9, spokes i--i+5.
inline RegularGraph petersen_graph() {
    std::vector<RegularGraph::Edge> edges;
    for (int i = 0; i < 5; ++i) edges.emplace_back(i, (i + 1) % 5);
    for (int i = 0; i < 5; ++i) edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    for (int i = 0; i < 5; ++i) edges.emplace_back(i, i + 5);
    return RegularGraph::build(10, edges);
}

inline RegularGraph disjoint_union(const RegularGraph& a, const RegularGraph& b) {
    std::vector<RegularGraph::Edge> edges = a.edges();
    for (const auto& e : b.edges())
        edges.emplace_back(e.first + a.vertex_count(), e.second + a.vertex_count());
    return RegularGraph::build(a.vertex_count() + b.vertex_count(), edges, a.mode());
}

}  // namespace regraph
