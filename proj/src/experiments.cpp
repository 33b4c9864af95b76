#include "dppmom/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "dppmom/errors.hpp"
#include "dppmom/sampler.hpp"

namespace dppmom::experiments {

using kernel::Kernel;
using linalg::SymMatrix;

namespace {

// Seed-derivation roles; folded into the stream key so kernel generation and
// sampling never share a stream.
constexpr std::uint64_t kRoleKernel = 1;
constexpr std::uint64_t kRoleSampler = 2;

} // namespace

Kernel gen_cycle_kernel(int n, RngSeed seed) {
    if (n < 3) throw input_error("gen_cycle_kernel: need N >= 3");
    auto gen = rng::Xoshiro256pp::from_seed(seed);
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 0.5);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        m.set(std::min(i, j), std::max(i, j), 0.25 * gen.sign());
    }
    return Kernel::checked(std::move(m), 0.25);
}

Kernel gen_clique_kernel(int n, RngSeed seed, int* rejections) {
    if (n < 3) throw input_error("gen_clique_kernel: need N >= 3");
    const double beta = 1.0 / (4.0 * std::sqrt(double(n)));
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto gen = rng::Xoshiro256pp::from_key(
            rng::derive_key({seed.seed, seed.stream, std::uint64_t(attempt)}));
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, 0.5);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m.set(i, j, beta * gen.sign());
        if (linalg::is_valid_kernel(m, 1e-9)) {
            if (rejections) *rejections = attempt;
            return Kernel::checked(std::move(m), beta);
        }
    }
    throw numeric_error("gen_clique_kernel: 100 consecutive invalid draws");
}

graph::UGraph random_chordal_graph(int n, RngSeed seed, int max_attach) {
    if (n < 1) throw input_error("random_chordal_graph: need n >= 1");
    auto gen = rng::Xoshiro256pp::from_seed(seed);
    std::vector<std::vector<int>> adj(n);
    std::vector<graph::Edge> edges;
    auto adjacent = [&](int a, int b) {
        return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
    };
    for (int v = 1; v < n; ++v) {
        // Pick the attachment clique: grow inside a random anchor's closed
        // neighborhood, only through vertices of modest degree.
        const int want = int(gen.below(std::uint64_t(max_attach) + 1)); // 0 => new component
        if (want == 0) continue;
        const int anchor = int(gen.below(v));
        std::vector<int> clique{anchor};
        std::vector<int> pool = adj[anchor];
        while (int(clique.size()) < want && !pool.empty()) {
            const int pick = int(gen.below(pool.size()));
            const int cand = pool[pick];
            pool.erase(pool.begin() + pick);
            if (int(adj[cand].size()) >= 2 * max_attach) continue;
            bool ok = true;
            for (int c : clique)
                if (c != cand && !adjacent(c, cand)) ok = false;
            if (ok && std::find(clique.begin(), clique.end(), cand) == clique.end())
                clique.push_back(cand);
        }
        for (int c : clique) {
            adj[v].push_back(c);
            adj[c].push_back(v);
            edges.push_back({c, v});
        }
    }
    return graph::UGraph(n, std::move(edges));
}

Kernel gen_chordal_kernel(int n, RngSeed seed, int max_attach) {
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 100) throw numeric_error("gen_chordal_kernel: no valid draw in 100 graphs");
        const auto key = rng::derive_key({seed.seed, seed.stream, std::uint64_t(attempt)});
        const graph::UGraph g = random_chordal_graph(n, RngSeed{key, 0}, max_attach);
        auto gen = rng::Xoshiro256pp::from_key(rng::derive_key({key, 7}));
        std::vector<int> signs(g.edge_count());
        for (auto& s : signs) s = gen.sign();
        for (double alpha : {0.25, 0.125, 0.0625, 0.03125}) {
            SymMatrix m(n);
            for (int i = 0; i < n; ++i) m.set(i, i, 0.5);
            for (int e = 0; e < g.edge_count(); ++e)
                m.set(g.edge(e).u, g.edge(e).v, alpha * signs[e]);
            if (linalg::is_valid_kernel(m, 1e-9)) return Kernel::checked(std::move(m), alpha);
        }
    }
}

std::string family_name(Family f) {
    switch (f) {
        case Family::cycle: return "cycle";
        case Family::clique: return "clique";
        case Family::chordal_random: return "chordal-random";
        case Family::file: return "file";
    }
    return "?";
}

std::string method_name(SampleMethod m) {
    switch (m) {
        case SampleMethod::spectral: return "spectral";
        case SampleMethod::bruteforce: return "bruteforce";
        case SampleMethod::oracle: return "oracle";
    }
    return "?";
}

namespace {

struct TrialOutcome {
    bool ok = false;
    bool graph = false;
    bool signs = false;
    double rho = 0.0;
    double seconds = 0.0;
};

Kernel make_trial_kernel(const TrialConfig& cfg, int N, RngSeed kseed) {
    switch (cfg.family) {
        case Family::cycle: return gen_cycle_kernel(N, kseed);
        case Family::clique: return gen_clique_kernel(N, kseed);
        case Family::chordal_random: return gen_chordal_kernel(N, kseed);
        case Family::file: {
            SymMatrix m = linalg::load_kernel_csv(cfg.kernel_file, true);
            return Kernel::checked(std::move(m));
        }
    }
    throw input_error("run_grid: unknown family");
}

TrialOutcome run_trial(const TrialConfig& cfg, int N, long nsamples, int trial) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialOutcome out;
    try {
        const std::uint64_t kkey = rng::derive_key(
            {cfg.base_seed, std::uint64_t(N), std::uint64_t(nsamples), std::uint64_t(trial), kRoleKernel});
        const Kernel truth = make_trial_kernel(cfg, N, RngSeed{kkey, 0});
        double alpha = cfg.alpha;
        if (alpha == 0.0) {
            if (!truth.alpha()) throw input_error("run_grid: --alpha required for file kernels");
            alpha = *truth.alpha();
        }

        estimator::EstimateOptions opts{.force_general = cfg.force_general};
        estimator::EstimateResult result = [&] {
            if (cfg.method == SampleMethod::oracle) {
                estimator::MinorFn minors = [&truth](const std::vector<int>& s) {
                    return linalg::determinant(linalg::principal_submatrix(truth.matrix(), s));
                };
                return estimator::estimate_from_minors(minors, N, alpha, opts, nsamples);
            }
            const std::uint64_t skey = rng::derive_key({cfg.base_seed, std::uint64_t(N),
                                                        std::uint64_t(nsamples),
                                                        std::uint64_t(trial), kRoleSampler});
            const sampler::SampleSet samples =
                cfg.method == SampleMethod::bruteforce
                    ? sampler::sample_bruteforce(truth, int(nsamples), RngSeed{skey, 0})
                    : sampler::sample_spectral(truth, int(nsamples), RngSeed{skey, 0});
            return estimator::estimate(samples, alpha, opts);
        }();

        const auto metrics = estimator::success_metrics(truth, result);
        out.ok = true;
        out.graph = metrics.graph_recovered;
        out.signs = metrics.signs_recovered;
        out.rho = metrics.rho_value;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "trial failure (N=%d n=%ld trial=%d): %s\n", N, nsamples, trial,
                     e.what());
        out.ok = false;
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

int thread_pool_size() {
    if (const char* env = std::getenv("DPPMOM_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

} // namespace

GridResult run_grid(const TrialConfig& cfg) {
    if (cfg.n_grid.empty() || cfg.sample_grid.empty())
        throw input_error("run_grid: empty grid");
    if (cfg.trials < 1) throw input_error("run_grid: trials must be >= 1");
    for (long n : cfg.sample_grid)
        if (n < 1 && cfg.method != SampleMethod::oracle)
            throw input_error("run_grid: sample counts must be >= 1");

    struct Job {
        int cell;
        int N;
        long n;
        int trial;
    };
    std::vector<Job> jobs;
    const int cells = int(cfg.n_grid.size() * cfg.sample_grid.size());
    for (int c = 0; c < cells; ++c) {
        const int N = cfg.n_grid[c / cfg.sample_grid.size()];
        const long n = cfg.sample_grid[c % cfg.sample_grid.size()];
        for (int t = 0; t < cfg.trials; ++t) jobs.push_back({c, N, n, t});
    }

    std::vector<TrialOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            outcomes[j] = run_trial(cfg, jobs[j].N, jobs[j].n, jobs[j].trial);
        }
    };
    const int nthreads = std::min<int>(thread_pool_size(), int(jobs.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    GridResult grid;
    grid.cells.resize(cells);
    for (int c = 0; c < cells; ++c) {
        auto& cell = grid.cells[c];
        cell.N = cfg.n_grid[c / cfg.sample_grid.size()];
        cell.n = cfg.sample_grid[c % cfg.sample_grid.size()];
        cell.trials = cfg.trials;
    }
    // Deterministic aggregation: job list order is fixed by (cell, trial).
    std::vector<int> rho_counts(cells, 0);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        auto& cell = grid.cells[jobs[j].cell];
        const auto& o = outcomes[j];
        cell.seconds += o.seconds;
        if (!o.ok) {
            ++cell.failures;
            continue;
        }
        cell.graph_rate += o.graph ? 1.0 : 0.0;
        cell.sign_rate += o.signs ? 1.0 : 0.0;
        cell.mean_rho += o.rho;
        ++rho_counts[jobs[j].cell];
    }
    for (int c = 0; c < cells; ++c) {
        auto& cell = grid.cells[c];
        cell.graph_rate /= double(cfg.trials);
        cell.sign_rate /= double(cfg.trials);
        cell.mean_rho = rho_counts[c] ? cell.mean_rho / double(rho_counts[c]) : 0.0;
    }
    return grid;
}

void write_grid_csv(const GridResult& grid, const TrialConfig& cfg, std::ostream& out) {
    out << "family,N,n,trials,graph_rate,sign_rate,mean_rho,seconds\n";
    char buf[160];
    for (const auto& c : grid.cells) {
        std::snprintf(buf, sizeof buf, "%s,%d,%ld,%d,%.6f,%.6f,%.9g,%.3f\n",
                      family_name(cfg.family).c_str(), c.N, c.n, c.trials, c.graph_rate,
                      c.sign_rate, c.mean_rho, c.seconds);
        out << buf;
    }
}

} // namespace dppmom::experiments
