#include "dppmom/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>

#include "dppmom/errors.hpp"

namespace dppmom::graph {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

} // namespace

UGraph::UGraph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) throw input_error("UGraph: vertex count must be >= 1");
    for (auto& e : edges) {
        if (e.u == e.v) throw input_error("UGraph: self-loop");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (e.u < 0 || e.v >= n) throw input_error("UGraph: vertex out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw input_error("UGraph: duplicate edge");
    edges_ = std::move(edges);

    adj_.resize(n);
    for (const auto& e : edges_) {
        adj_[e.u].push_back(e.v);
        adj_[e.v].push_back(e.u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());

    UnionFind uf(n);
    for (const auto& e : edges_) uf.unite(e.u, e.v);
    comp_.resize(n);
    std::vector<int> remap(n, -1);
    kappa_ = 0;
    for (int v = 0; v < n; ++v) {
        const int r = uf.find(v);
        if (remap[r] < 0) remap[r] = kappa_++;
        comp_[v] = remap[r];
    }
}

int UGraph::edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    const Edge key{u, v};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || !(*it == key)) return -1;
    return int(it - edges_.begin());
}

int cyclomatic_number(const UGraph& g) {
    return g.edge_count() - g.vertex_count() + g.component_count();
}

BfsTree bfs_tree(const UGraph& g, int root) {
    const int n = g.vertex_count();
    BfsTree t{std::vector<int>(n, -1), std::vector<int>(n, -1)};
    t.dist[root] = 0;
    std::deque<int> q{root};
    while (!q.empty()) {
        const int x = q.front();
        q.pop_front();
        for (int y : g.neighbors(x)) {
            if (t.dist[y] < 0) {
                t.dist[y] = t.dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    // Smallest predecessor, found by scanning ascending neighbor lists.
    for (int v = 0; v < n; ++v) {
        if (t.dist[v] <= 0) continue;
        for (int x : g.neighbors(v)) {
            if (t.dist[x] == t.dist[v] - 1) {
                t.pred[v] = x;
                break;
            }
        }
    }
    return t;
}

std::optional<std::vector<int>> bfs_shortest_path(const UGraph& g, int u, int v) {
    if (u < 0 || u >= g.vertex_count() || v < 0 || v >= g.vertex_count())
        throw input_error("bfs_shortest_path: vertex out of range");
    const BfsTree t = bfs_tree(g, u);
    if (t.dist[v] < 0) return std::nullopt;
    std::vector<int> path;
    for (int w = v; w != -1; w = t.pred[w]) path.push_back(w);
    std::reverse(path.begin(), path.end());
    return path;
}

bool is_peo(const UGraph& g, const std::vector<int>& order) {
    const int n = g.vertex_count();
    if (int(order.size()) != n) return false;
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; ++i) {
        if (order[i] < 0 || order[i] >= n || pos[order[i]] >= 0) return false;
        pos[order[i]] = i;
    }
    for (int i = 0; i < n; ++i) {
        const int v = order[i];
        int star = -1, star_pos = n;
        for (int w : g.neighbors(v))
            if (pos[w] > i && pos[w] < star_pos) {
                star_pos = pos[w];
                star = w;
            }
        if (star < 0) continue;
        for (int w : g.neighbors(v))
            if (pos[w] > i && w != star && !g.has_edge(star, w)) return false;
    }
    return true;
}

std::optional<Peo> lex_bfs_peo(const UGraph& g) {
    // Simple O(n^2 + nm) Lex-BFS: labels are the descending lists of visit
    // times of numbered neighbors; at each step pick the unnumbered vertex
    // with the lexicographically largest label (ties to smallest id).
    const int n = g.vertex_count();
    std::vector<std::vector<int>> label(n);
    std::vector<bool> numbered(n, false);
    std::vector<int> visit;
    visit.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (numbered[v]) continue;
            if (best < 0 || label[v] > label[best]) best = v;
        }
        numbered[best] = true;
        visit.push_back(best);
        for (int w : g.neighbors(best))
            if (!numbered[w]) label[w].push_back(n - step);
    }

    std::vector<int> order(visit.rbegin(), visit.rend());
    if (!is_peo(g, order)) return std::nullopt;

    Peo p;
    p.order = std::move(order);
    p.star.assign(n, -1);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[p.order[i]] = i;
    for (int i = 0; i < n; ++i) {
        int star_pos = n;
        for (int w : g.neighbors(p.order[i]))
            if (pos[w] > i && pos[w] < star_pos) star_pos = pos[w];
        p.star[i] = star_pos == n ? -1 : star_pos;
    }
    return p;
}

UGraph peo_spanning_forest(const UGraph& g, const Peo& p) {
    if (!is_peo(g, p.order)) throw input_error("peo_spanning_forest: not a valid PEO");
    const int n = g.vertex_count();
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[p.order[i]] = i;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        int star_pos = n;
        for (int w : g.neighbors(p.order[i]))
            if (pos[w] > i && pos[w] < star_pos) star_pos = pos[w];
        if (star_pos == n) continue;
        edges.push_back({p.order[i], p.order[star_pos]});
    }
    UGraph forest(n, std::move(edges));
    if (forest.edge_count() != n - g.component_count() || cyclomatic_number(forest) != 0)
        throw internal_error("peo_spanning_forest: forest invariant violated");
    return forest;
}

UGraph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open graph file: " + path);
    int n = 0, m = 0;
    if (!(in >> n >> m)) throw input_error("bad graph header in " + path);
    std::vector<Edge> edges;
    edges.reserve(m);
    for (int k = 0; k < m; ++k) {
        int i = 0, j = 0;
        if (!(in >> i >> j)) throw input_error("truncated edge list in " + path);
        edges.push_back({i - 1, j - 1}); // file is 1-based
    }
    return UGraph(n, std::move(edges));
}

void save_edge_list(const UGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write graph file: " + path);
    out << g.vertex_count() << " " << g.edge_count() << "\n";
    for (const auto& e : g.edges()) out << e.u + 1 << " " << e.v + 1 << "\n";
}

} // namespace dppmom::graph
