#pragma once

#include <utility>

#include "dppmom/kernel.hpp"

namespace dppmom::bounds {

/// Parameters of the sample-complexity calculators. Logarithms are natural
/// throughout (the bounds' base is unspecified; nats are the documented
/// choice).
struct ComplexityQuery {
    int N = 1;          // dimension
    int ell = 2;        // cycle sparsity
    double alpha = 0.5; // separation
    double eps = 0.1;   // target accuracy (estimation bound only)
    double delta = 0.1; // failure probability (recovery bound only)
    double C = 1.0;     // unspecified constant knob
};

/// Calculators return the ceiling and keep the raw real value for plotting.
struct BoundValue {
    double raw = 0.0;
    long long samples = 0;
};

/// Sign-recovery bound: ceil( log(N^{ell+1}/delta) / (alpha/4)^{2 ell} ).
BoundValue sample_bound_recovery(const ComplexityQuery& q);

/// Estimation bound, dimensionally consistent reading:
/// ceil( C * (1/(alpha^2 eps^2) + ell * (4/alpha)^{2 ell}) * log N ).
BoundValue sample_bound_estimation(const ComplexityQuery& q);

/// The two ell x ell lower-bound kernels: diagonal 1/2, adjacent entries
/// alpha, closing entry +alpha / -alpha. Valid kernels for alpha <= 1/8.
struct LowerBoundKernelPair {
    kernel::Kernel kplus;
    kernel::Kernel kminus;
};
LowerBoundKernelPair lower_bound_kernels(int ell, double alpha);

/// Exact KL divergence and squared Hellinger distance between DPP(K1) and
/// DPP(K2), by enumerating all 2^N subset probabilities (N <= 16). The
/// Hellinger convention is the squared distance sum (sqrt p - sqrt q)^2,
/// no square root and no 1/2 factor; hence the _sq suffix.
struct DivergencePair {
    double kl = 0.0;
    double hellinger_sq = 0.0;
};
DivergencePair divergence_exhaustive(const kernel::Kernel& k1, const kernel::Kernel& k2);

/// Block-diagonal family for the minimax argument: K(0) has floor(N/ell)
/// K+ blocks (zero padding when ell does not divide N); K(j) swaps the j-th
/// block for K-. Returns {K(0), K(1), ..., K(L)}.
std::vector<kernel::Kernel> fano_family(int N, int ell, double alpha);

} // namespace dppmom::bounds
