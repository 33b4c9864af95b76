#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dppmom/graph.hpp"
#include "dppmom/linalg.hpp"

namespace dppmom::kernel {

/**
 * DPP kernel: symmetric N x N matrix with spectrum in [0,1], identified only
 * up to conjugation by diagonal +-1 matrices. `checked` constructors enforce
 * the spectrum (tolerance 1e-9) and, when alpha metadata is present, the
 * separation rule: every off-diagonal entry is 0 or has magnitude >= alpha.
 *
 * Finite-sample estimates routinely step outside [0,1] in spectrum, so the
 * estimator stores its output through `estimate_unchecked`; such kernels
 * carry is_spectrum_checked() == false.
 */
class Kernel {
  public:
    static Kernel checked(linalg::SymMatrix m, std::optional<double> alpha = std::nullopt);
    static Kernel estimate_unchecked(linalg::SymMatrix m);

    const linalg::SymMatrix& matrix() const { return m_; }
    int size() const { return m_.size(); }
    double operator()(int i, int j) const { return m_(i, j); }
    std::optional<double> alpha() const { return alpha_; }
    bool is_spectrum_checked() const { return checked_; }

  private:
    Kernel(linalg::SymMatrix m, std::optional<double> a, bool checked)
        : m_(std::move(m)), alpha_(a), checked_(checked) {}
    friend Kernel dn_conjugate(const Kernel&, std::span<const int>);
    linalg::SymMatrix m_;
    std::optional<double> alpha_;
    bool checked_ = false;
};

/// Per-edge sign in {+1,-1}, indexed by the edge_index of its graph.
struct SignAssignment {
    std::vector<int> signs;
};

/// Edge {i,j} iff K_ij != 0 exactly. Ground-truth kernels only: entries are
/// constructed, not measured. Estimated kernels use the alpha-threshold rule
/// in the estimator instead.
graph::UGraph induced_graph(const Kernel& k);

/// D K D with D = diag(signs); diagonal unchanged, K_ij -> s_i s_j K_ij.
Kernel dn_conjugate(const Kernel& k, std::span<const int> signs);

/// Exact pseudo-distance min_D |D K D - K2|_inf by enumerating 2^(N-1) sign
/// vectors (first coordinate pinned to +1; D and -D act identically).
/// Dimensions above 24 raise capability_error: use rho_heuristic there.
double rho(const Kernel& k, const Kernel& k2);

/// Heuristic upper bound on rho for large N: greedy sign propagation along a
/// BFS spanning forest of the induced graph of k, then single-vertex flips
/// until no improvement. Never used by the acceptance tests.
double rho_heuristic(const Kernel& k, const Kernel& k2);

/// P[Y = S] = |det(K - I_Sbar)| where I_Sbar has ones on the diagonal
/// outside S.
double subset_probability(const Kernel& k, std::span<const int> s);

/// Delta_S for an induced cycle, by explicit enumeration of the matchings of
/// the cycle plus the signed full-cycle product term. |S| capped at 16;
/// serves as the combinatorial cross-check of the LU determinant.
double induced_cycle_minor_expansion(const Kernel& k, std::span<const int> s);

/// Product of sgn(K_e) over the edges of a cycle; every edge must be present
/// in the induced graph.
int cycle_sign(const Kernel& k, std::span<const graph::Edge> cycle_edges);

/// Sign assignments serialize as an edge list with a +-1 column.
void save_sign_assignment(const graph::UGraph& g, const SignAssignment& s,
                          const std::string& path);

} // namespace dppmom::kernel
