#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "dppmom/cyclebasis.hpp"
#include "dppmom/kernel.hpp"
#include "dppmom/sampler.hpp"

namespace dppmom::estimator {

/**
 * Principal-minor estimates Delta_S keyed by the (sorted, 0-based) index set.
 * Empirical tables come from counting S-containments over the samples;
 * oracle tables come from determinants of a reference kernel.
 */
struct MomentTable {
    std::map<std::vector<int>, double> delta;
    long n = 0; // sample count behind the table (0 for oracle tables)

    double at(const std::vector<int>& s) const;
    bool contains(const std::vector<int>& s) const { return delta.count(s) != 0; }
};

/// Delta_S = (1/n) sum_p 1{S subseteq Y_p}; exact counting, one pass over the
/// samples per batch. Subsets of size <= 2 use the per-sample bitmask fast
/// path when the ground set fits in 64 bits.
MomentTable empirical_minors(const sampler::SampleSet& samples,
                             const std::vector<std::vector<int>>& subsets);

/// Delta_S = det(K_S) by the LU determinant; the exact-moment path of the
/// pipeline (and the epsilon = 0 case of its error contract).
MomentTable exact_minors(const kernel::Kernel& k, const std::vector<std::vector<int>>& subsets);

/// Any source of principal-minor values, for perturbation studies and custom
/// oracles. Receives sorted 0-based index sets.
using MinorFn = std::function<double(const std::vector<int>&)>;

/// All index sets of size 1 and 2 over [n] (the stage-1 batch).
std::vector<std::vector<int>> size_le2_subsets(int n);

struct GraphRecovery {
    graph::UGraph ghat;
    std::vector<double> khat_diag;   // K^_ii = Delta^_{i}
    linalg::SymMatrix bhat;          // raw B^_ij = K^_ii K^_jj - Delta^_{ij}
};

/// Edge {i,j} iff raw B^_ij >= alpha^2/2. Magnitudes later use B^ clamped to
/// [0,1]; the edge test uses the raw value, exactly as specified.
GraphRecovery recover_graph(const MomentTable& m, double alpha, int n);

/// The moment statistic whose sign is the product of the cycle's edge signs:
///   H^ = Delta^_S - det(Ktilde_S) + 2 (-1)^{|S|+1} prod_{edges of ghat(S)} B^{1/2}.
/// Ktilde_S has diagonal K^_ii and off-diagonal B^{1/2} on ghat's edges.
double cycle_term(const MomentTable& m, std::span<const double> khat_diag,
                  const linalg::SymMatrix& bhat, const graph::UGraph& ghat,
                  const cyclebasis::Cycle& c);

enum class SignSystemStatus { solved, fallback_all_ones };

struct SignRecovery {
    kernel::SignAssignment signs;
    SignSystemStatus status = SignSystemStatus::solved;
    bool near_zero_h = false; // some |H^| < 1e-12 was treated as positive
};

/// Builds A (basis incidence rows) and b (b_i = 1 iff H^_i > 0; exact zeros
/// count as positive and set the near-zero flag), solves Ax = b over GF(2)
/// (free variables 0), and maps x to signs 2x - 1. Edges covered by no basis
/// cycle get +1. Inconsistent systems fall back to all-ones, recorded in the
/// status.
SignRecovery recover_signs(const graph::UGraph& ghat, const cyclebasis::CycleBasis& basis,
                           std::span<const double> hhat);

enum class EstimatePath { general, chordal };

struct EstimateResult {
    kernel::Kernel khat;
    graph::UGraph ghat;
    cyclebasis::CycleBasis basis;
    std::vector<double> hhat; // per basis cycle
    SignSystemStatus sign_system_status = SignSystemStatus::solved;
    int sparsity_estimate = 2;
    EstimatePath path = EstimatePath::general;
    bool near_zero_h_warning = false;
    bool chorded_basis_warning = false;
    long sample_count = 0;
    double alpha = 0.0;
    linalg::SymMatrix bhat_raw; // diagnostic; histogram helps users pick alpha
};

struct EstimateOptions {
    bool force_general = false;
};

/// The full pipeline on samples: minors of size <= 2, graph recovery,
/// shortest maximal cycle basis, cycle terms, GF(2) sign recovery, kernel
/// assembly. Dispatches to the O(m) chordal sign pass when the recovered
/// graph is chordal (unless force_general).
EstimateResult estimate(const sampler::SampleSet& samples, double alpha,
                        const EstimateOptions& opts = {});

/// Chordal fast path entry point; falls back to the general path when the
/// recovered graph is not chordal.
EstimateResult estimate_chordal(const sampler::SampleSet& samples, double alpha);

/// Same pipeline fed by an arbitrary minor source (oracle minors, perturbed
/// minors). n_for_record only annotates the result.
EstimateResult estimate_from_minors(const MinorFn& minors, int n, double alpha,
                                    const EstimateOptions& opts = {}, long n_for_record = 0);

struct SuccessMetrics {
    bool graph_recovered = false;
    bool signs_recovered = false;
    double rho_value = 0.0;
};

/// graph_recovered: ghat equals the induced graph of the truth, as edge sets.
/// signs_recovered: additionally the edge-sign pattern differs from the truth
/// by a vertex flip pattern (a cut-space vector). rho_value: exact rho.
SuccessMetrics success_metrics(const kernel::Kernel& truth, const EstimateResult& r);

} // namespace dppmom::estimator
