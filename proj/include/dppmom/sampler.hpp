#pragma once

#include <string>
#include <vector>

#include "dppmom/kernel.hpp"
#include "dppmom/rng.hpp"

namespace dppmom::sampler {

using rng::RngSeed;

/// The observed data: a multiset of subsets of [N], each sorted ascending.
struct SampleSet {
    int ground_size = 0;
    std::vector<std::vector<int>> subsets;

    int count() const { return int(subsets.size()); }
};

/**
 * Oracle sampler: builds the full 2^N probability table p(S) = |det(K - I_Sbar)|
 * once (N <= 20), renormalizes residual rounding (the factor must be within
 * 1e-8 of 1), then draws by inverse CDF. Signed determinants below -1e-10
 * mean the kernel is invalid and raise numeric_error.
 */
SampleSet sample_bruteforce(const kernel::Kernel& k, int n, RngSeed seed);

/**
 * Workhorse sampler: one eigendecomposition per call, then per draw an
 * independent Bernoulli(lambda_i) eigenvector selection (eigenvalues clamped
 * to [0,1]) followed by sequential projection-DPP sampling with Gram-Schmidt
 * updates; residual vectors with norm below 1e-12 count as exhausted.
 */
SampleSet sample_spectral(const kernel::Kernel& k, int n, RngSeed seed);

/// Samples file: one line per sample, space-separated ascending 1-based
/// indices; an empty line encodes the empty set.
void save_samples(const SampleSet& s, const std::string& path);
/// ground_size is inferred as the maximum index unless ndim_override > 0.
SampleSet load_samples(const std::string& path, int ndim_override = 0);

} // namespace dppmom::sampler
