#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "dppmom/errors.hpp"
#include "dppmom/estimator.hpp"
#include "dppmom/sampler.hpp"
#include "test_util.hpp"

using namespace dppmom;
using kernel::Kernel;
using linalg::SymMatrix;
using sampler::RngSeed;
using testutil::random_kernel;

namespace {

std::vector<double> exact_table(const Kernel& k) {
    const int n = k.size();
    std::vector<double> p(std::size_t(1) << n);
    std::vector<int> subset;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        subset.clear();
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) subset.push_back(i);
        p[mask] = kernel::subset_probability(k, subset);
    }
    return p;
}

std::vector<long> count_table(const sampler::SampleSet& s) {
    std::vector<long> c(std::size_t(1) << s.ground_size, 0);
    for (const auto& subset : s.subsets) ++c[testutil::mask_of(subset)];
    return c;
}

} // namespace

TEST_CASE("bruteforce sampler degenerate kernels") {
    const double one[] = {1.0};
    auto k1 = Kernel::checked(SymMatrix::diagonal(one));
    auto s = sampler::sample_bruteforce(k1, 5, {1, 0});
    for (const auto& y : s.subsets) CHECK(y == std::vector<int>{0});

    const double zero[] = {0.0};
    auto k0 = Kernel::checked(SymMatrix::diagonal(zero));
    s = sampler::sample_bruteforce(k0, 5, {1, 0});
    for (const auto& y : s.subsets) CHECK(y.empty());

    const double half[] = {0.5};
    auto kh = Kernel::checked(SymMatrix::diagonal(half));
    s = sampler::sample_bruteforce(kh, 100000, {1, 0});
    long ones = 0;
    for (const auto& y : s.subsets) ones += int(y.size());
    CHECK(std::abs(double(ones) / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("bruteforce sampler caps and errors") {
    const double d[21] = {};
    auto big = Kernel::checked(SymMatrix::diagonal(d));
    CHECK_THROWS_AS(sampler::sample_bruteforce(big, 1, {0, 0}), capability_error);
}

TEST_CASE("spectral sampler: projection kernels have fixed cardinality") {
    for (int trial = 0; trial < 5; ++trial) {
        auto g = rng::Xoshiro256pp::from_key(rng::derive_key({91, std::uint64_t(trial)}));
        const int n = 5;
        SymMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) a.set(i, j, testutil::gaussian(g));
        const auto dec = linalg::eig_sym(a);
        const int rank = 1 + int(g.below(n));
        SymMatrix proj(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int t = 0; t < rank; ++t) s += dec.vec(i, t, n) * dec.vec(j, t, n);
                proj.set(i, j, s);
            }
        auto k = Kernel::checked(std::move(proj));
        const auto s = sampler::sample_spectral(k, 200, {std::uint64_t(trial), 3});
        for (const auto& y : s.subsets) CHECK(int(y.size()) == rank);
    }
}

TEST_CASE("spectral sampler: diagonal kernels give independent Bernoullis") {
    const double d[] = {0.9, 0.5, 0.1};
    auto k = Kernel::checked(SymMatrix::diagonal(d));
    const int n = 50000;
    const auto s = sampler::sample_spectral(k, n, {7, 7});
    long count[3] = {0, 0, 0};
    for (const auto& y : s.subsets)
        for (int i : y) ++count[i];
    CHECK(std::abs(double(count[0]) / n - 0.9) < 0.01);
    CHECK(std::abs(double(count[1]) / n - 0.5) < 0.01);
    CHECK(std::abs(double(count[2]) / n - 0.1) < 0.01);
}

TEST_CASE("spectral matches bruteforce: TV at N=4") {
    const auto k = random_kernel(4, 4242);
    const auto exact = exact_table(k);
    const int n = 200000;
    const auto s = sampler::sample_spectral(k, n, {11, 0});
    const auto counts = count_table(s);
    CHECK(testutil::tv_distance(exact, counts, n) <= 0.01);
}

TEST_CASE("identical (seed, stream) gives identical samples") {
    const auto k = random_kernel(5, 999);
    const auto a = sampler::sample_spectral(k, 500, {123, 45});
    const auto b = sampler::sample_spectral(k, 500, {123, 45});
    CHECK(a.subsets == b.subsets);
    const auto c = sampler::sample_spectral(k, 500, {123, 46});
    CHECK(a.subsets != c.subsets);

    const auto d = sampler::sample_bruteforce(k, 500, {9, 1});
    const auto e = sampler::sample_bruteforce(k, 500, {9, 1});
    CHECK(d.subsets == e.subsets);
}

TEST_CASE("empirical containment fractions meet the Hoeffding envelope") {
    // |Delta^_S - det(K_S)| <= 4 sqrt(log(1/delta) / 2n), delta = 1e-3, n = 1e5
    const int n = 100000;
    const double envelope = 4.0 * std::sqrt(std::log(1000.0) / (2.0 * n));
    const auto k = random_kernel(5, 31337);
    const auto s = sampler::sample_spectral(k, n, {31337, 0});

    std::vector<std::vector<int>> subsets;
    for (int i = 0; i < 5; ++i) subsets.push_back({i});
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) subsets.push_back({i, j});
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int l = j + 1; l < 5; ++l) subsets.push_back({i, j, l});

    const auto table = estimator::empirical_minors(s, subsets);
    for (const auto& sub : subsets) {
        const double truth = linalg::determinant(linalg::principal_submatrix(k.matrix(), sub));
        CHECK(std::abs(table.at(sub) - truth) <= envelope);
    }
}

TEST_CASE("spectral sampler chi-square agreement over 100 seeded runs") {
    const auto k = random_kernel(4, 60601);
    const auto exact = exact_table(k);
    const int n = 200000;

    int df = -1; // cells with positive mass, minus one
    for (double p : exact)
        if (p > 0.0) ++df;
    const double threshold = testutil::chi2_quantile(df, 3.090232306167814); // 0.999

    int below = 0;
    for (int run = 0; run < 100; ++run) {
        const auto s = sampler::sample_spectral(k, n, {777, std::uint64_t(run)});
        const auto counts = count_table(s);
        double stat = 0.0;
        for (std::size_t cell = 0; cell < exact.size(); ++cell) {
            if (exact[cell] <= 0.0) continue;
            const double expd = exact[cell] * n;
            const double diff = double(counts[cell]) - expd;
            stat += diff * diff / expd;
        }
        if (stat < threshold) ++below;
    }
    CHECK(below >= 99);
}

TEST_CASE("samples file round trip") {
    const auto k = random_kernel(5, 808);
    const auto s = sampler::sample_spectral(k, 200, {5, 5});
    const std::string path = "test_samples_roundtrip.txt";
    sampler::save_samples(s, path);
    const auto back = sampler::load_samples(path, 5);
    CHECK(back.ground_size == 5);
    CHECK(back.subsets == s.subsets);
    std::remove(path.c_str());
}
