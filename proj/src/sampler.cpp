#include "dppmom/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dppmom/errors.hpp"

namespace dppmom::sampler {

SampleSet sample_bruteforce(const kernel::Kernel& k, int n, RngSeed seed) {
    const int N = k.size();
    if (N > 20) throw capability_error("sample_bruteforce: probability table capped at N <= 20");
    if (n < 0) throw input_error("sample_bruteforce: negative sample count");

    const std::size_t cells = std::size_t(1) << N;
    std::vector<double> prob(cells);
    double total = 0.0;
    for (std::size_t mask = 0; mask < cells; ++mask) {
        std::vector<double> m = k.matrix().data();
        int outside = 0;
        for (int i = 0; i < N; ++i)
            if (!(mask >> i & 1)) {
                m[std::size_t(i) * N + i] -= 1.0;
                ++outside;
            }
        // Signed value: (-1)^{|Sbar|} det(K - I_Sbar) must be a probability.
        double p = linalg::determinant_dense(std::move(m), N);
        if (outside & 1) p = -p;
        if (p < -1e-10)
            throw numeric_error("sample_bruteforce: negative subset probability (invalid kernel)");
        prob[mask] = std::max(p, 0.0);
        total += prob[mask];
    }
    if (std::abs(total - 1.0) > 1e-8)
        throw numeric_error("sample_bruteforce: probability table sums to " + std::to_string(total));
    std::vector<double> cdf(cells);
    double acc = 0.0;
    for (std::size_t mask = 0; mask < cells; ++mask) {
        acc += prob[mask] / total;
        cdf[mask] = acc;
    }
    cdf[cells - 1] = 1.0;

    auto gen = rng::Xoshiro256pp::from_seed(seed);
    SampleSet out;
    out.ground_size = N;
    out.subsets.reserve(n);
    for (int t = 0; t < n; ++t) {
        const double u = gen.uniform01();
        const std::size_t mask =
            std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        std::vector<int> subset;
        for (int i = 0; i < N; ++i)
            if (mask >> i & 1) subset.push_back(i);
        out.subsets.push_back(std::move(subset));
    }
    return out;
}

namespace {

/// One projection-DPP draw from the orthonormal columns in `w` (n x cols,
/// column-major, consumed in place). Appends the chosen items to `items`.
/// `rowmass` is caller-owned scratch so the hot loop never allocates.
void projection_dpp_draw(std::vector<double>& w, int n, int cols, rng::Xoshiro256pp& gen,
                         std::vector<int>& items, std::vector<double>& rowmass) {
    rowmass.resize(n);
    while (cols > 0) {
        // P(i) = sum_j w(i,j)^2 / cols
        double total = 0.0;
        const double u = gen.uniform01();
        int chosen = -1;
        std::fill(rowmass.begin(), rowmass.end(), 0.0);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = w[std::size_t(j) * n + i];
                rowmass[i] += x * x;
            }
        for (int i = 0; i < n; ++i) total += rowmass[i];
        double target = u * total;
        for (int i = 0; i < n; ++i) {
            target -= rowmass[i];
            if (target < 0.0) {
                chosen = i;
                break;
            }
        }
        if (chosen < 0) chosen = n - 1; // u ~ 1 rounding edge
        items.push_back(chosen);

        // Pivot on the column with the largest weight at `chosen`, use it to
        // zero coordinate `chosen` in the others, then drop it.
        int piv = 0;
        double best = std::abs(w[std::size_t(0) * n + chosen]);
        for (int j = 1; j < cols; ++j) {
            const double v = std::abs(w[std::size_t(j) * n + chosen]);
            if (v > best) {
                best = v;
                piv = j;
            }
        }
        const double pval = w[std::size_t(piv) * n + chosen];
        for (int j = 0; j < cols; ++j) {
            if (j == piv) continue;
            const double f = w[std::size_t(j) * n + chosen] / pval;
            if (f != 0.0)
                for (int i = 0; i < n; ++i)
                    w[std::size_t(j) * n + i] -= f * w[std::size_t(piv) * n + i];
        }
        if (piv != cols - 1)
            std::copy_n(w.begin() + std::size_t(cols - 1) * n, n, w.begin() + std::size_t(piv) * n);
        --cols;

        // Re-orthonormalize (modified Gram-Schmidt); exhausted vectors are
        // dropped.
        int kept = 0;
        for (int j = 0; j < cols; ++j) {
            if (j != kept)
                std::copy_n(w.begin() + std::size_t(j) * n, n, w.begin() + std::size_t(kept) * n);
            double* col = &w[std::size_t(kept) * n];
            for (int p = 0; p < kept; ++p) {
                const double* prev = &w[std::size_t(p) * n];
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += col[i] * prev[i];
                for (int i = 0; i < n; ++i) col[i] -= dot * prev[i];
            }
            double norm2 = 0.0;
            for (int i = 0; i < n; ++i) norm2 += col[i] * col[i];
            const double norm = std::sqrt(norm2);
            if (norm < 1e-12) continue; // exhausted
            for (int i = 0; i < n; ++i) col[i] /= norm;
            ++kept;
        }
        cols = kept;
    }
}

} // namespace

SampleSet sample_spectral(const kernel::Kernel& k, int n, RngSeed seed) {
    if (n < 0) throw input_error("sample_spectral: negative sample count");
    const int N = k.size();
    const auto dec = linalg::eig_sym(k.matrix());
    std::vector<double> lambda(dec.values);
    for (auto& l : lambda) l = std::clamp(l, 0.0, 1.0);

    auto gen = rng::Xoshiro256pp::from_seed(seed);
    SampleSet out;
    out.ground_size = N;
    out.subsets.reserve(n);
    std::vector<double> w, rowmass;
    std::vector<int> items;
    for (int t = 0; t < n; ++t) {
        w.clear();
        int cols = 0;
        for (int j = 0; j < N; ++j)
            if (gen.bernoulli(lambda[j])) {
                w.insert(w.end(), dec.vectors.begin() + std::size_t(j) * N,
                         dec.vectors.begin() + std::size_t(j + 1) * N);
                ++cols;
            }
        items.clear();
        projection_dpp_draw(w, N, cols, gen, items, rowmass);
        std::sort(items.begin(), items.end());
        out.subsets.emplace_back(items);
    }
    return out;
}

void save_samples(const SampleSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write samples file: " + path);
    for (const auto& subset : s.subsets) {
        for (std::size_t i = 0; i < subset.size(); ++i)
            out << subset[i] + 1 << (i + 1 == subset.size() ? "" : " ");
        out << "\n";
    }
}

SampleSet load_samples(const std::string& path, int ndim_override) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open samples file: " + path);
    SampleSet s;
    std::string line;
    int maxidx = 0;
    while (std::getline(in, line)) {
        std::vector<int> subset;
        std::stringstream ss(line);
        int idx;
        while (ss >> idx) {
            if (idx < 1) throw input_error("samples file has non-positive index: " + path);
            subset.push_back(idx - 1);
            maxidx = std::max(maxidx, idx);
        }
        std::sort(subset.begin(), subset.end());
        subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
        s.subsets.push_back(std::move(subset));
    }
    s.ground_size = ndim_override > 0 ? ndim_override : maxidx;
    if (ndim_override > 0 && maxidx > ndim_override)
        throw input_error("samples file index exceeds --ndim");
    return s;
}

} // namespace dppmom::sampler
