#include "dppmom/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <bit>

#include "dppmom/errors.hpp"

namespace dppmom::estimator {

using cyclebasis::Cycle;
using cyclebasis::CycleBasis;
using graph::UGraph;
using kernel::Kernel;
using linalg::SymMatrix;

double MomentTable::at(const std::vector<int>& s) const {
    if (s.empty()) return 1.0; // every sample contains the empty set
    auto it = delta.find(s);
    if (it == delta.end()) throw input_error("MomentTable: subset not tabulated");
    return it->second;
}

std::vector<std::vector<int>> size_le2_subsets(int n) {
    std::vector<std::vector<int>> out;
    out.reserve(std::size_t(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i) out.push_back({i});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.push_back({i, j});
    return out;
}

namespace {

std::vector<int> sorted_copy(const std::vector<int>& s) {
    std::vector<int> t(s);
    std::sort(t.begin(), t.end());
    return t;
}

} // namespace

MomentTable empirical_minors(const sampler::SampleSet& samples,
                             const std::vector<std::vector<int>>& subsets) {
    if (samples.count() < 1) throw input_error("empirical_minors: need n >= 1 samples");
    const int N = samples.ground_size;
    MomentTable table;
    table.n = samples.count();
    const double inv_n = 1.0 / double(samples.count());

    if (N <= 64) {
        // Bitmask fast path: one pass builds masks, one pass per batch counts.
        std::vector<std::uint64_t> masks(samples.subsets.size(), 0);
        for (std::size_t p = 0; p < samples.subsets.size(); ++p)
            for (int i : samples.subsets[p]) masks[p] |= std::uint64_t(1) << i;

        // All size <= 2 requests share a single pass over the samples.
        bool want_le2 = false;
        for (const auto& s : subsets)
            if (s.size() <= 2) want_le2 = true;
        std::vector<long> single(N, 0);
        std::vector<long> pair(std::size_t(N) * N, 0);
        if (want_le2) {
            for (const auto m : masks) {
                std::uint64_t rest = m;
                while (rest) {
                    const int i = std::countr_zero(rest);
                    rest &= rest - 1;
                    ++single[i];
                    std::uint64_t rest2 = rest;
                    while (rest2) {
                        const int j = std::countr_zero(rest2);
                        rest2 &= rest2 - 1;
                        ++pair[std::size_t(i) * N + j];
                    }
                }
            }
        }
        for (const auto& s : subsets) {
            const auto key = sorted_copy(s);
            for (int i : key)
                if (i < 0 || i >= N) throw input_error("empirical_minors: index out of range");
            if (key.empty()) {
                table.delta[key] = 1.0;
            } else if (key.size() == 1) {
                table.delta[key] = double(single[key[0]]) * inv_n;
            } else if (key.size() == 2) {
                table.delta[key] = double(pair[std::size_t(key[0]) * N + key[1]]) * inv_n;
            } else {
                std::uint64_t want = 0;
                for (int i : key) want |= std::uint64_t(1) << i;
                long c = 0;
                for (const auto m : masks)
                    if ((m & want) == want) ++c;
                table.delta[key] = double(c) * inv_n;
            }
        }
        return table;
    }

    // Sorted-set path for ground sets beyond 64 elements.
    for (const auto& s : subsets) {
        const auto key = sorted_copy(s);
        long c = 0;
        for (const auto& y : samples.subsets)
            if (std::includes(y.begin(), y.end(), key.begin(), key.end())) ++c;
        table.delta[key] = double(c) * inv_n;
    }
    return table;
}

MomentTable exact_minors(const Kernel& k, const std::vector<std::vector<int>>& subsets) {
    MomentTable table;
    table.n = 0;
    for (const auto& s : subsets) {
        const auto key = sorted_copy(s);
        table.delta[key] =
            key.empty() ? 1.0 : linalg::determinant(linalg::principal_submatrix(k.matrix(), key));
    }
    return table;
}

GraphRecovery recover_graph(const MomentTable& m, double alpha, int n) {
    if (n < 1) throw input_error("recover_graph: dimension must be >= 1");
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = m.at({i});

    SymMatrix bhat(n);
    std::vector<graph::Edge> edges;
    const double threshold = 0.5 * alpha * alpha;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double b = diag[i] * diag[j] - m.at({i, j});
            bhat.set(i, j, b);
            if (b >= threshold) edges.push_back({i, j});
        }
    }
    return GraphRecovery{UGraph(n, std::move(edges)), std::move(diag), std::move(bhat)};
}

namespace {

double clamped_magnitude(double braw) { return std::sqrt(std::clamp(braw, 0.0, 1.0)); }

/// det(Ktilde_S) and the full-cycle product, shared by cycle_term.
double cycle_term_impl(double delta_s, std::span<const double> khat_diag, const SymMatrix& bhat,
                       const UGraph& ghat, const std::vector<int>& verts) {
    const int L = int(verts.size());
    std::vector<double> sub(std::size_t(L) * L, 0.0);
    double prod = 1.0;
    int edge_count = 0;
    for (int a = 0; a < L; ++a) {
        sub[std::size_t(a) * L + a] = khat_diag[verts[a]];
        for (int b = a + 1; b < L; ++b) {
            if (!ghat.has_edge(verts[a], verts[b])) continue;
            const double mag = clamped_magnitude(bhat(verts[a], verts[b]));
            sub[std::size_t(a) * L + b] = mag;
            sub[std::size_t(b) * L + a] = mag;
            prod *= mag;
            ++edge_count;
        }
    }
    (void)edge_count;
    const double det = linalg::determinant_dense(std::move(sub), L);
    const double sign = (L & 1) ? 1.0 : -1.0; // (-1)^{|S|+1}
    return delta_s - det + 2.0 * sign * prod;
}

} // namespace

double cycle_term(const MomentTable& m, std::span<const double> khat_diag, const SymMatrix& bhat,
                  const UGraph& ghat, const Cycle& c) {
    const auto verts = sorted_copy(c.vertices);
    for (int v : verts) {
        if (v < 0 || v >= int(khat_diag.size()))
            throw input_error("cycle_term: cycle vertex out of range");
    }
    for (std::size_t t = 0; t < c.vertices.size(); ++t) {
        const int u = c.vertices[t], w = c.vertices[(t + 1) % c.vertices.size()];
        if (bhat(u, w) <= 0.0) throw input_error("cycle_term: nonpositive B^ on a cycle edge");
    }
    return cycle_term_impl(m.at(verts), khat_diag, bhat, ghat, verts);
}

SignRecovery recover_signs(const UGraph& ghat, const CycleBasis& basis,
                           std::span<const double> hhat) {
    if (hhat.size() != basis.cycles.size())
        throw input_error("recover_signs: one H^ value per basis cycle required");
    const int m = ghat.edge_count();
    SignRecovery out;

    gf2::Gf2Matrix a(int(basis.cycles.size()), m);
    gf2::Gf2Vector b(int(basis.cycles.size()));
    for (std::size_t i = 0; i < basis.cycles.size(); ++i) {
        a.row(int(i)) = basis.cycles[i].incidence;
        const bool near = std::abs(hhat[i]) < 1e-12;
        if (near) out.near_zero_h = true;
        // |H^| below 1e-12 counts as positive; ties are measure-zero under sampling.
        if (hhat[i] > 0.0 || near) b.set(int(i), true);
    }

    auto x = gf2::solve(a, b);
    out.signs.signs.assign(m, 1);
    if (!x) {
        out.status = SignSystemStatus::fallback_all_ones;
        return out; // x = 1_m
    }
    out.status = SignSystemStatus::solved;
    std::vector<bool> covered(m, false);
    for (const auto& c : basis.cycles)
        for (int e = 0; e < m; ++e)
            if (c.incidence.get(e)) covered[e] = true;
    for (int e = 0; e < m; ++e) {
        if (!covered[e]) continue; // bridge/forest edges stay +1
        out.signs.signs[e] = x->get(e) ? 1 : -1;
    }
    return out;
}

namespace {

Kernel assemble_khat(const GraphRecovery& rec) {
    const int n = int(rec.khat_diag.size());
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, rec.khat_diag[i]);
    for (const auto& e : rec.ghat.edges())
        m.set(e.u, e.v, clamped_magnitude(rec.bhat(e.u, e.v)));
    return Kernel::estimate_unchecked(std::move(m));
}

Kernel apply_signs(const Kernel& k, const UGraph& ghat, const kernel::SignAssignment& s) {
    SymMatrix m = k.matrix();
    for (int e = 0; e < ghat.edge_count(); ++e) {
        const auto& ed = ghat.edge(e);
        m.set(ed.u, ed.v, double(s.signs[e]) * m(ed.u, ed.v));
    }
    return Kernel::estimate_unchecked(std::move(m));
}

struct MinorSource {
    virtual ~MinorSource() = default;
    virtual MomentTable table(const std::vector<std::vector<int>>& subsets) = 0;
};

struct SampleMinorSource final : MinorSource {
    const sampler::SampleSet& samples;
    explicit SampleMinorSource(const sampler::SampleSet& s) : samples(s) {}
    MomentTable table(const std::vector<std::vector<int>>& subsets) override {
        return empirical_minors(samples, subsets);
    }
};

struct FunctionMinorSource final : MinorSource {
    const MinorFn& fn;
    long n_record;
    explicit FunctionMinorSource(const MinorFn& f, long n) : fn(f), n_record(n) {}
    MomentTable table(const std::vector<std::vector<int>>& subsets) override {
        MomentTable t;
        t.n = n_record;
        for (const auto& s : subsets) {
            auto key = sorted_copy(s);
            t.delta[key] = fn(key);
        }
        return t;
    }
};

/// General path: Horton basis + GF(2) solve.
EstimateResult run_general(MinorSource& src, GraphRecovery rec, double alpha, long n_record) {
    CycleBasis basis = cyclebasis::shortest_maximal_cycle_basis(rec.ghat);

    std::vector<std::vector<int>> cycle_sets;
    cycle_sets.reserve(basis.cycles.size());
    for (const auto& c : basis.cycles) cycle_sets.push_back(sorted_copy(c.vertices));
    const MomentTable stage2 = src.table(cycle_sets);

    std::vector<double> hhat;
    hhat.reserve(basis.cycles.size());
    for (const auto& c : basis.cycles)
        hhat.push_back(cycle_term(stage2, rec.khat_diag, rec.bhat, rec.ghat, c));

    SignRecovery sr = recover_signs(rec.ghat, basis, hhat);
    Kernel khat = apply_signs(assemble_khat(rec), rec.ghat, sr.signs);

    EstimateResult r{std::move(khat),
                     rec.ghat,
                     std::move(basis),
                     std::move(hhat),
                     sr.status,
                     0,
                     EstimatePath::general,
                     sr.near_zero_h,
                     false,
                     n_record,
                     alpha,
                     rec.bhat};
    r.sparsity_estimate = r.basis.sparsity;
    r.chorded_basis_warning = r.basis.chorded_fallback;
    return r;
}

/// Chordal path: PEO spanning forest, forest edges +1, each remaining edge
/// signed from the triangle {v_i, v_j, v_{i*}} in an order that guarantees
/// the other two triangle edges are already signed.
EstimateResult run_chordal(MinorSource& src, GraphRecovery rec, const graph::Peo& peo,
                           double alpha, long n_record) {
    const UGraph& g = rec.ghat;
    const int n = g.vertex_count();
    const int m = g.edge_count();

    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[peo.order[i]] = i;

    const UGraph forest = graph::peo_spanning_forest(g, peo);

    std::vector<int> signs(m, 0);
    for (const auto& e : forest.edges()) signs[g.edge_index(e.u, e.v)] = 1;

    struct Pending {
        int edge_id;
        int i_pos, j_pos; // PEO positions, i_pos < j_pos
    };
    std::vector<Pending> pending;
    for (int e = 0; e < m; ++e) {
        if (signs[e] != 0) continue;
        const auto& ed = g.edge(e);
        int ip = pos[ed.u], jp = pos[ed.v];
        if (ip > jp) std::swap(ip, jp);
        pending.push_back({e, ip, jp});
    }
    // "i > j if max e_i < max e_j": descending max position; ties broken by
    // descending min position so the dependency edge {j, i*} is always ready.
    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        if (a.j_pos != b.j_pos) return a.j_pos > b.j_pos;
        return a.i_pos > b.i_pos;
    });

    // One batch of triangle minors.
    std::vector<std::vector<int>> tri_sets;
    tri_sets.reserve(pending.size());
    for (const auto& p : pending) {
        const int vi = peo.order[p.i_pos], vj = peo.order[p.j_pos];
        const int vstar = peo.order[peo.star[p.i_pos]];
        tri_sets.push_back(sorted_copy({vi, vj, vstar}));
    }
    const MomentTable tri_table = src.table(tri_sets);

    CycleBasis basis;
    basis.nu = graph::cyclomatic_number(g);
    std::vector<double> hhat;
    bool near_zero = false;
    for (const auto& p : pending) {
        const int vi = peo.order[p.i_pos], vj = peo.order[p.j_pos];
        const int star_pos = peo.star[p.i_pos];
        const int vstar = peo.order[star_pos];
        const Cycle tri = cyclebasis::make_cycle(g, {vi, vj, vstar});
        const double h = cycle_term(tri_table, rec.khat_diag, rec.bhat, g, tri);
        const bool near = std::abs(h) < 1e-12;
        if (near) near_zero = true;
        const int s_h = (h > 0.0 || near) ? 1 : -1;
        const int e_istar = g.edge_index(vi, vstar);
        const int e_jstar = g.edge_index(vj, vstar);
        if (signs[e_istar] == 0 || signs[e_jstar] == 0)
            throw internal_error("chordal sign pass: dependency edge not yet signed");
        signs[p.edge_id] = s_h * signs[e_istar] * signs[e_jstar];
        basis.cycles.push_back(tri);
        hhat.push_back(h);
    }
    basis.sparsity = basis.cycles.empty() ? 2 : 3;
    if (int(basis.cycles.size()) != basis.nu)
        throw internal_error("chordal sign pass: triangle count != cyclomatic number");

    kernel::SignAssignment sa{std::move(signs)};
    for (int& s : sa.signs)
        if (s == 0) s = 1; // isolated-by-construction safety; forest covered all
    Kernel khat = apply_signs(assemble_khat(rec), g, sa);

    EstimateResult r{std::move(khat),
                     rec.ghat,
                     std::move(basis),
                     std::move(hhat),
                     SignSystemStatus::solved,
                     0,
                     EstimatePath::chordal,
                     near_zero,
                     false,
                     n_record,
                     alpha,
                     rec.bhat};
    r.sparsity_estimate = r.basis.sparsity;
    return r;
}

EstimateResult run_pipeline(MinorSource& src, int n, double alpha, const EstimateOptions& opts,
                            long n_record) {
    if (alpha <= 0.0 || alpha >= 1.0) throw input_error("estimate: alpha must be in (0,1)");
    const MomentTable stage1 = src.table(size_le2_subsets(n));
    GraphRecovery rec = recover_graph(stage1, alpha, n);

    if (!opts.force_general) {
        if (auto peo = graph::lex_bfs_peo(rec.ghat))
            return run_chordal(src, std::move(rec), *peo, alpha, n_record);
    }
    return run_general(src, std::move(rec), alpha, n_record);
}

} // namespace

EstimateResult estimate(const sampler::SampleSet& samples, double alpha,
                        const EstimateOptions& opts) {
    if (samples.count() < 1) throw input_error("estimate: need n >= 1 samples");
    SampleMinorSource src(samples);
    return run_pipeline(src, samples.ground_size, alpha, opts, samples.count());
}

EstimateResult estimate_chordal(const sampler::SampleSet& samples, double alpha) {
    return estimate(samples, alpha, EstimateOptions{.force_general = false});
}

EstimateResult estimate_from_minors(const MinorFn& minors, int n, double alpha,
                                    const EstimateOptions& opts, long n_for_record) {
    FunctionMinorSource src(minors, n_for_record);
    return run_pipeline(src, n, alpha, opts, n_for_record);
}

SuccessMetrics success_metrics(const Kernel& truth, const EstimateResult& r) {
    SuccessMetrics out;
    const UGraph gk = kernel::induced_graph(truth);
    out.graph_recovered = (gk == r.ghat);

    if (out.graph_recovered) {
        // Edge-wise sign agreement must be a vertex flip pattern: 2-color each
        // component so s_u s_v matches the per-edge agreement, and check back
        // edges for consistency.
        const int n = gk.vertex_count();
        std::vector<int> color(n, 0);
        bool consistent = true;
        for (int root = 0; root < n && consistent; ++root) {
            if (color[root] != 0) continue;
            color[root] = 1;
            std::vector<int> stack{root};
            while (!stack.empty() && consistent) {
                const int x = stack.back();
                stack.pop_back();
                for (int y : gk.neighbors(x)) {
                    const double agree = truth(x, y) * r.khat(x, y);
                    const int want = agree > 0.0 ? color[x] : -color[x];
                    if (agree == 0.0) {
                        consistent = false; // a degenerate zero estimate on an edge
                        break;
                    }
                    if (color[y] == 0) {
                        color[y] = want;
                        stack.push_back(y);
                    } else if (color[y] != want) {
                        consistent = false;
                        break;
                    }
                }
            }
        }
        out.signs_recovered = consistent;
    }
    out.rho_value = kernel::rho(r.khat, truth);
    return out;
}

} // namespace dppmom::estimator
