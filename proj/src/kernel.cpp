#include "dppmom/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <bit>
#include <fstream>

#include "dppmom/errors.hpp"

namespace dppmom::kernel {

Kernel Kernel::checked(linalg::SymMatrix m, std::optional<double> alpha) {
    if (!linalg::is_valid_kernel(m, 1e-9))
        throw input_error("Kernel: spectrum outside [0,1] (tol 1e-9)");
    if (alpha) {
        if (*alpha <= 0.0 || *alpha >= 1.0) throw input_error("Kernel: alpha must be in (0,1)");
        for (int i = 0; i < m.size(); ++i)
            for (int j = i + 1; j < m.size(); ++j)
                if (m(i, j) != 0.0 && std::abs(m(i, j)) < *alpha)
                    throw input_error("Kernel: off-diagonal entry below alpha separation");
    }
    return Kernel(std::move(m), alpha, true);
}

Kernel Kernel::estimate_unchecked(linalg::SymMatrix m) {
    return Kernel(std::move(m), std::nullopt, false);
}

graph::UGraph induced_graph(const Kernel& k) {
    std::vector<graph::Edge> edges;
    for (int i = 0; i < k.size(); ++i)
        for (int j = i + 1; j < k.size(); ++j)
            if (k(i, j) != 0.0) edges.push_back({i, j});
    return graph::UGraph(k.size(), std::move(edges));
}

Kernel dn_conjugate(const Kernel& k, std::span<const int> signs) {
    if (int(signs.size()) != k.size()) throw input_error("dn_conjugate: sign vector size mismatch");
    for (int s : signs)
        if (s != 1 && s != -1) throw input_error("dn_conjugate: signs must be +-1");
    linalg::SymMatrix m = k.matrix();
    for (int i = 0; i < k.size(); ++i)
        for (int j = i + 1; j < k.size(); ++j)
            m.set(i, j, double(signs[i] * signs[j]) * k(i, j));
    // conjugation preserves spectrum and entry magnitudes
    return Kernel(std::move(m), k.alpha(), k.is_spectrum_checked());
}

double rho(const Kernel& k, const Kernel& k2) {
    const int n = k.size();
    if (n != k2.size()) throw input_error("rho: dimension mismatch");
    if (n > 24)
        throw capability_error("rho: exact search capped at N <= 24; use rho_heuristic");
    std::vector<int> s(n, 1);
    double best = std::numeric_limits<double>::infinity();
    const std::uint64_t count = std::uint64_t(1) << (n > 0 ? n - 1 : 0);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (int i = 1; i < n; ++i) s[i] = (mask >> (i - 1)) & 1 ? -1 : 1;
        double worst = 0.0;
        for (int i = 0; i < n && worst < best; ++i)
            for (int j = i; j < n; ++j) {
                const double d = std::abs(double(s[i] * s[j]) * k(i, j) - k2(i, j));
                if (d > worst) worst = d;
            }
        if (worst < best) best = worst;
        if (best == 0.0) break;
    }
    return best;
}

namespace {

double supnorm_diff(const Kernel& k, const Kernel& k2, const std::vector<int>& s) {
    double worst = 0.0;
    for (int i = 0; i < k.size(); ++i)
        for (int j = i; j < k.size(); ++j)
            worst = std::max(worst, std::abs(double(s[i] * s[j]) * k(i, j) - k2(i, j)));
    return worst;
}

} // namespace

double rho_heuristic(const Kernel& k, const Kernel& k2) {
    const int n = k.size();
    if (n != k2.size()) throw input_error("rho_heuristic: dimension mismatch");
    const graph::UGraph g = induced_graph(k);
    std::vector<int> s(n, 1);
    // Propagate along a spanning forest so each tree edge's sign product
    // matches k2, then hill-climb on single-vertex flips.
    std::vector<bool> seen(n, false);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = true;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (int y : g.neighbors(x)) {
                if (seen[y]) continue;
                seen[y] = true;
                const double prod = k(x, y) * k2(x, y);
                s[y] = (prod >= 0.0 ? s[x] : -s[x]);
                stack.push_back(y);
            }
        }
    }
    double best = supnorm_diff(k, k2, s);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int v = 0; v < n; ++v) {
            s[v] = -s[v];
            const double t = supnorm_diff(k, k2, s);
            if (t < best) {
                best = t;
                improved = true;
            } else {
                s[v] = -s[v];
            }
        }
    }
    return best;
}

double subset_probability(const Kernel& k, std::span<const int> s) {
    const int n = k.size();
    std::vector<bool> in(n, false);
    for (int i : s) {
        if (i < 0 || i >= n) throw input_error("subset_probability: index out of range");
        in[i] = true;
    }
    std::vector<double> m = k.matrix().data();
    for (int i = 0; i < n; ++i)
        if (!in[i]) m[std::size_t(i) * n + i] -= 1.0;
    return std::abs(linalg::determinant_dense(std::move(m), n));
}

double induced_cycle_minor_expansion(const Kernel& k, std::span<const int> s) {
    std::vector<int> verts(s.begin(), s.end());
    std::sort(verts.begin(), verts.end());
    const int len = int(verts.size());
    if (len < 3) throw input_error("induced_cycle_minor_expansion: need |S| >= 3");
    if (len > 16)
        throw capability_error("induced_cycle_minor_expansion: matchings enumeration capped at |S| <= 16");

    // Collect the edges of G_K(S) and verify they form a single simple cycle.
    std::vector<std::vector<int>> nbr(len);
    int edge_count = 0;
    for (int a = 0; a < len; ++a)
        for (int b = a + 1; b < len; ++b)
            if (k(verts[a], verts[b]) != 0.0) {
                nbr[a].push_back(b);
                nbr[b].push_back(a);
                ++edge_count;
            }
    if (edge_count != len) throw input_error("induced_cycle_minor_expansion: S does not induce a cycle");
    for (const auto& v : nbr)
        if (int(v.size()) != 2) throw input_error("induced_cycle_minor_expansion: S does not induce a cycle");
    // Walk the cycle to confirm it is connected (one cycle, not two).
    std::vector<int> walk{0};
    int prev = -1, cur = 0;
    do {
        const int next = (nbr[cur][0] != prev) ? nbr[cur][0] : nbr[cur][1];
        prev = cur;
        cur = next;
        walk.push_back(cur);
    } while (cur != 0);
    if (int(walk.size()) != len + 1)
        throw input_error("induced_cycle_minor_expansion: S does not induce a single cycle");

    // Cycle edges in walk order: edge t joins walk[t], walk[t+1].
    std::vector<double> edge_val(len);
    for (int t = 0; t < len; ++t) edge_val[t] = k(verts[walk[t]], verts[walk[t + 1]]);

    // Matchings of C_len: edge subsets with no two cyclically adjacent edges.
    double sum = 0.0;
    const std::uint32_t all = (len == 32) ? ~0u : ((1u << len) - 1);
    for (std::uint32_t m = 0;; ++m) {
        const std::uint32_t rot = ((m << 1) | (m >> (len - 1))) & all;
        if ((m & rot) == 0) {
            double term = ((std::popcount(m) & 1) ? -1.0 : 1.0);
            std::uint32_t covered = 0;
            for (int t = 0; t < len; ++t)
                if (m & (1u << t)) {
                    term *= edge_val[t] * edge_val[t];
                    covered |= (1u << t) | (1u << ((t + 1) % len));
                }
            for (int t = 0; t < len; ++t)
                if (!(covered & (1u << t))) term *= k(verts[walk[t]], verts[walk[t]]);
            sum += term;
        }
        if (m == all) break;
    }

    double full = 2.0 * ((len & 1) ? 1.0 : -1.0); // 2 * (-1)^(|S|+1)
    for (int t = 0; t < len; ++t) full *= edge_val[t];
    return sum + full;
}

int cycle_sign(const Kernel& k, std::span<const graph::Edge> cycle_edges) {
    int sign = 1;
    for (const auto& e : cycle_edges) {
        const double v = k(e.u, e.v);
        if (v == 0.0) throw input_error("cycle_sign: edge absent from the induced graph");
        if (v < 0.0) sign = -sign;
    }
    return sign;
}

void save_sign_assignment(const graph::UGraph& g, const SignAssignment& s,
                          const std::string& path) {
    if (int(s.signs.size()) != g.edge_count())
        throw input_error("save_sign_assignment: sign count mismatch");
    std::ofstream out(path);
    if (!out) throw input_error("cannot write sign file: " + path);
    out << g.vertex_count() << " " << g.edge_count() << "\n";
    for (int e = 0; e < g.edge_count(); ++e)
        out << g.edge(e).u + 1 << " " << g.edge(e).v + 1 << " "
            << (s.signs[e] > 0 ? "+1" : "-1") << "\n";
}

} // namespace dppmom::kernel
