#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dppmom/estimator.hpp"
#include "dppmom/kernel.hpp"
#include "dppmom/rng.hpp"

namespace dppmom::experiments {

using rng::RngSeed;

/// K = (1/2) I + (1/4) A, A = +-1 (each w.p. 1/2) exactly on the edges of the
/// N-cycle. Gershgorin gives 0 <= K <= I; alpha = 1/4 by construction.
kernel::Kernel gen_cycle_kernel(int n, RngSeed seed);

/// K = (1/2) I + (1/(4 sqrt N)) A, A full +-1 symmetric. Validity only holds
/// with high probability, so invalid draws are rejected and resampled on a
/// fresh stream; the rejection count is reported through `rejections`.
/// 100 consecutive rejections raise numeric_error.
kernel::Kernel gen_clique_kernel(int n, RngSeed seed, int* rejections = nullptr);

/// Random chordal graph built by clique attachment: each new vertex picks a
/// clique inside an existing vertex's closed neighborhood (possibly empty,
/// which starts a new component). The reverse insertion order is a PEO by
/// construction. max_attach caps both the attachment size and the degree of
/// attachment targets.
graph::UGraph random_chordal_graph(int n, RngSeed seed, int max_attach = 3);

/// Valid kernel on a random chordal graph: diagonal 1/2, edges +-alpha with
/// random signs, alpha the largest value in {1/4, 1/8, 1/16, 1/32} that keeps
/// the spectrum in [0,1] (rejection over graphs when even 1/32 fails).
kernel::Kernel gen_chordal_kernel(int n, RngSeed seed, int max_attach = 3);

enum class Family { cycle, clique, chordal_random, file };
enum class SampleMethod { spectral, bruteforce, oracle }; // oracle = exact minors, no sampling

struct TrialConfig {
    Family family = Family::cycle;
    std::vector<int> n_grid;       // matrix dimensions N
    std::vector<long> sample_grid; // sample counts n
    int trials = 50;
    double alpha = 0.0; // 0 = the family's true separation
    std::uint64_t base_seed = 0;
    SampleMethod method = SampleMethod::spectral;
    std::string kernel_file; // Family::file
    bool force_general = false;
};

struct CellResult {
    int N = 0;
    long n = 0;
    int trials = 0;
    double graph_rate = 0.0;
    double sign_rate = 0.0;
    double mean_rho = 0.0;
    int failures = 0;    // trials that raised instead of estimating
    double seconds = 0.0; // summed trial wall time (not part of determinism)
};

struct GridResult {
    std::vector<CellResult> cells;
};

/// Runs trials x |n_grid| x |sample_grid| seeded jobs (parallel across a
/// small thread pool, DPPMOM_THREADS overrides the size) and aggregates
/// deterministically by (cell, trial).
GridResult run_grid(const TrialConfig& cfg);

/// CSV columns: family,N,n,trials,graph_rate,sign_rate,mean_rho,seconds.
/// Everything except `seconds` is bit-reproducible for a fixed config.
void write_grid_csv(const GridResult& grid, const TrialConfig& cfg, std::ostream& out);

std::string family_name(Family f);
std::string method_name(SampleMethod m);

} // namespace dppmom::experiments
