#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dppmom::graph {

struct Edge {
    int u, v; // u < v after normalization
    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

/**
 * Undirected simple graph on [n]. Edges are stored sorted lexicographically;
 * the position of an edge in that list is its edge_index, the coordinate the
 * GF(2)^m incidence vectors use everywhere (cycle space, sign system).
 * Immutable after construction.
 */
class UGraph {
  public:
    UGraph(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return int(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int idx) const { return edges_[idx]; }

    bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }
    /// Position of {u,v} in the sorted edge list, or -1.
    int edge_index(int u, int v) const;

    /// Neighbors in ascending order.
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return int(adj_[v].size()); }

    int component_count() const { return kappa_; }
    const std::vector<int>& component_ids() const { return comp_; }

    bool operator==(const UGraph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> comp_;
    int kappa_ = 0;
};

/// m - n + kappa(G); isolated vertices count as their own components.
int cyclomatic_number(const UGraph& g);

/// Shortest u-v path with deterministic tie-breaking: each vertex's
/// predecessor is its smallest-index neighbor one BFS level closer to u.
/// nullopt when v is unreachable from u.
std::optional<std::vector<int>> bfs_shortest_path(const UGraph& g, int u, int v);

/// BFS distances plus the smallest-predecessor array for one root; the
/// pred-chains form a consistent shortest-path tree (Horton needs that).
struct BfsTree {
    std::vector<int> dist; // -1 = unreachable
    std::vector<int> pred; // -1 at the root / unreachable
};
BfsTree bfs_tree(const UGraph& g, int root);

/**
 * Perfect elimination ordering: order[i] is the i-th vertex; for every i the
 * later neighborhood of order[i] induces a clique. star[i] is the position of
 * the first later neighbor of order[i] (-1 when there is none, i.e. the
 * vertex is last in its component).
 */
struct Peo {
    std::vector<int> order;
    std::vector<int> star;
};

/// True iff `order` is a perfect elimination ordering of g.
bool is_peo(const UGraph& g, const std::vector<int>& order);

/// Lex-BFS followed by an explicit clique-verification pass; the verification
/// doubles as the Peo invariant oracle. nullopt when g is not chordal.
std::optional<Peo> lex_bfs_peo(const UGraph& g);

/// The spanning forest {{v_i, v_{i*}}}: one edge per vertex that has a later
/// neighbor, n - kappa(G) edges total, acyclic, spanning every component.
UGraph peo_spanning_forest(const UGraph& g, const Peo& p);

/// Edge-list text format: first line "n m", then m lines "i j" (1-based).
UGraph load_edge_list(const std::string& path);
void save_edge_list(const UGraph& g, const std::string& path);

} // namespace dppmom::graph
