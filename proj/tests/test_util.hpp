#pragma once

// Test-only oracles and fixtures. Everything here is independent of the
// library's implementation path for the quantity it checks.

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <vector>

#include "dppmom/graph.hpp"
#include "dppmom/kernel.hpp"
#include "dppmom/linalg.hpp"
#include "dppmom/rng.hpp"

namespace testutil {

using dppmom::graph::Edge;
using dppmom::graph::UGraph;
using dppmom::kernel::Kernel;
using dppmom::linalg::SymMatrix;

/// Cofactor-expansion determinant, O(n!) — the independent oracle for the LU
/// path (n <= 8).
inline double det_cofactor(const std::vector<std::vector<double>>& m) {
    const int n = int(m.size());
    if (n == 0) return 1.0;
    if (n == 1) return m[0][0];
    double sum = 0.0;
    for (int c = 0; c < n; ++c) {
        if (m[0][c] == 0.0) continue;
        std::vector<std::vector<double>> minor(n - 1, std::vector<double>(n - 1));
        for (int i = 1; i < n; ++i) {
            int jj = 0;
            for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                minor[i - 1][jj++] = m[i][j];
            }
        }
        sum += ((c & 1) ? -1.0 : 1.0) * m[0][c] * det_cofactor(minor);
    }
    return sum;
}

inline std::vector<std::vector<double>> to_rows(const SymMatrix& a) {
    std::vector<std::vector<double>> rows(a.size(), std::vector<double>(a.size()));
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) rows[i][j] = a(i, j);
    return rows;
}

/// Gaussian via Box-Muller on the library's uniform stream.
inline double gaussian(dppmom::rng::Xoshiro256pp& g) {
    double u1 = g.uniform01();
    while (u1 == 0.0) u1 = g.uniform01();
    const double u2 = g.uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// Random valid kernel: random symmetric -> Jacobi eigenvectors as a random
/// orthogonal frame, then eigenvalues ~ U[lo, hi].
inline Kernel random_kernel(int n, std::uint64_t key, double lo = 0.05, double hi = 0.95) {
    auto g = dppmom::rng::Xoshiro256pp::from_key(key);
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a.set(i, j, gaussian(g));
    const auto dec = dppmom::linalg::eig_sym(a);
    std::vector<double> lam(n);
    for (auto& l : lam) l = lo + (hi - lo) * g.uniform01();
    SymMatrix k(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int t = 0; t < n; ++t) s += lam[t] * dec.vec(i, t, n) * dec.vec(j, t, n);
            k.set(i, j, s);
        }
    return Kernel::checked(std::move(k));
}

/// Floyd-Warshall distances (oracle for BFS).
inline std::vector<std::vector<int>> floyd_warshall(const UGraph& g) {
    const int n = g.vertex_count();
    const int INF = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, INF));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

/// All simple cycles of g as edge-index bitmasks (m <= 31), found by
/// enumerating the cycle space over fundamental cycles and keeping the
/// connected, all-degree-2 elements.
struct SimpleCycleSet {
    std::vector<std::uint32_t> masks;
    std::vector<int> lengths;
};

inline SimpleCycleSet enumerate_simple_cycles(const UGraph& g) {
    using dppmom::graph::bfs_tree;
    const int n = g.vertex_count();
    const int m = g.edge_count();
    SimpleCycleSet out;

    // Fundamental cycles from a BFS forest.
    std::vector<std::uint32_t> fundamental;
    std::vector<int> parent(n, -1), depth(n, -1);
    std::vector<char> tree_edge(m, 0);
    for (int root = 0; root < n; ++root) {
        if (depth[root] >= 0) continue;
        depth[root] = 0;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y : g.neighbors(x))
                if (depth[y] < 0) {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    tree_edge[g.edge_index(x, y)] = 1;
                    stack.push_back(y);
                }
        }
    }
    for (int e = 0; e < m; ++e) {
        if (tree_edge[e]) continue;
        std::uint32_t mask = std::uint32_t(1) << e;
        int a = g.edge(e).u, b = g.edge(e).v;
        while (a != b) {
            if (depth[a] < depth[b]) std::swap(a, b);
            mask ^= std::uint32_t(1) << g.edge_index(a, parent[a]);
            a = parent[a];
        }
        fundamental.push_back(mask);
    }

    const int nu = int(fundamental.size());
    for (std::uint32_t combo = 1; combo < (std::uint32_t(1) << nu); ++combo) {
        std::uint32_t mask = 0;
        for (int i = 0; i < nu; ++i)
            if (combo >> i & 1) mask ^= fundamental[i];
        if (!mask) continue;
        // simple cycle: every touched vertex has degree 2 and the edges are
        // connected
        std::vector<int> deg(n, 0);
        std::vector<int> verts;
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) {
                for (int v : {g.edge(e).u, g.edge(e).v}) {
                    if (deg[v] == 0) verts.push_back(v);
                    ++deg[v];
                }
            }
        bool ok = true;
        for (int v : verts)
            if (deg[v] != 2) ok = false;
        if (!ok) continue;
        // connectivity over the cycle edges
        std::vector<int> stack{verts[0]};
        std::vector<char> seen(n, 0);
        seen[verts[0]] = 1;
        int seen_count = 1;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y : g.neighbors(x)) {
                const int e = g.edge_index(x, y);
                if ((mask >> e & 1) && !seen[y]) {
                    seen[y] = 1;
                    ++seen_count;
                    stack.push_back(y);
                }
            }
        }
        if (seen_count != int(verts.size())) continue;
        out.masks.push_back(mask);
        out.lengths.push_back(int(verts.size()));
    }
    return out;
}

/// GF(2) rank of a set of edge-masks.
inline int mask_rank(std::vector<std::uint32_t> rows) {
    int rank = 0;
    for (int bit = 0; bit < 32; ++bit) {
        int piv = -1;
        for (int i = rank; i < int(rows.size()); ++i)
            if (rows[i] >> bit & 1) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int i = 0; i < int(rows.size()); ++i)
            if (i != rank && (rows[i] >> bit & 1)) rows[i] ^= rows[rank];
        ++rank;
    }
    return rank;
}

/// Exhaustive minimum-total-length cycle basis; returns {total, max_len} or
/// {-1,-1} when nu = 0. Recursion over the sorted simple cycles with simple
/// pruning; intended for tiny graphs only.
struct BasisOptimum {
    long total = -1;
    int max_len = -1;
};

inline void basis_search(const SimpleCycleSet& cycles, const std::vector<int>& order,
                         std::size_t at, int need, std::vector<std::uint32_t>& chosen,
                         long total, long& best_total, int max_len, int& best_max) {
    if (need == 0) {
        if (best_total < 0 || total < best_total || (total == best_total && max_len < best_max)) {
            best_total = total;
            best_max = max_len;
        }
        return;
    }
    if (at >= order.size()) return;
    if (best_total >= 0) {
        // lower bound: remaining cycles are at least as long as cycles[at]
        long lb = total + long(need) * cycles.lengths[order[at]];
        if (lb > best_total) return;
    }
    for (std::size_t i = at; i + need <= order.size(); ++i) {
        const int idx = order[i];
        chosen.push_back(cycles.masks[idx]);
        if (mask_rank(chosen) == int(chosen.size()))
            basis_search(cycles, order, i + 1, need - 1, chosen, total + cycles.lengths[idx],
                         best_total, std::max(max_len, cycles.lengths[idx]), best_max);
        chosen.pop_back();
    }
}

inline BasisOptimum exhaustive_min_cycle_basis(const UGraph& g) {
    const int nu = dppmom::graph::cyclomatic_number(g);
    if (nu == 0) return {};
    const SimpleCycleSet cycles = enumerate_simple_cycles(g);
    std::vector<int> order(cycles.masks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return cycles.lengths[a] < cycles.lengths[b]; });
    long best_total = -1;
    int best_max = -1;
    std::vector<std::uint32_t> chosen;
    basis_search(cycles, order, 0, nu, chosen, 0, best_total, 0, best_max);
    BasisOptimum opt;
    opt.total = best_total;
    opt.max_len = best_max;
    return opt;
}

/// Minimum over all bases of the maximum member length (the shortest-maximal
/// optimum), by exhaustive search.
inline int exhaustive_min_max_cycle_len(const UGraph& g) {
    const int nu = dppmom::graph::cyclomatic_number(g);
    if (nu == 0) return 2;
    const SimpleCycleSet cycles = enumerate_simple_cycles(g);
    std::vector<int> order(cycles.masks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return cycles.lengths[a] < cycles.lengths[b]; });
    // Greedy by length over the full simple-cycle set achieves the minimum
    // possible maximum (matroid exchange), so scan in length order.
    std::vector<std::uint32_t> chosen;
    for (std::size_t i = 0; i < order.size() && int(chosen.size()) < nu; ++i) {
        chosen.push_back(cycles.masks[order[i]]);
        if (mask_rank(chosen) != int(chosen.size())) chosen.pop_back();
    }
    int mx = 0;
    for (auto m : chosen) mx = std::max(mx, int(std::popcount(m)));
    return mx;
}

/// Total-variation distance between an empirical subset distribution and an
/// exact table indexed by bitmask.
inline double tv_distance(const std::vector<double>& exact,
                          const std::vector<long>& counts, long n) {
    double tv = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i)
        tv += std::abs(exact[i] - double(counts[i]) / double(n));
    return 0.5 * tv;
}

/// Wilson-Hilferty chi-square quantile approximation (accurate to ~0.5% for
/// df >= 5), used as the 0.999 threshold in sampler agreement tests.
inline double chi2_quantile(double df, double z) {
    const double a = 2.0 / (9.0 * df);
    const double c = 1.0 - a + z * std::sqrt(a);
    return df * c * c * c;
}

inline std::uint32_t mask_of(const std::vector<int>& subset) {
    std::uint32_t m = 0;
    for (int i : subset) m |= std::uint32_t(1) << i;
    return m;
}

} // namespace testutil
