#include <doctest.h>

#include <cmath>

#include "dppmom/bounds.hpp"
#include "dppmom/errors.hpp"
#include "dppmom/estimator.hpp"
#include "test_util.hpp"

using namespace dppmom;
using bounds::ComplexityQuery;

TEST_CASE("recovery bound worked value and scalings") {
    ComplexityQuery q;
    q.N = 5;
    q.ell = 3;
    q.alpha = 0.5;
    q.delta = 0.1;
    const auto b = bounds::sample_bound_recovery(q);
    // ceil(log(5^4/0.1)/(0.5/4)^6) = ceil(2291226.835...) at full precision
    CHECK(b.samples == 2291227);
    CHECK(b.raw == doctest::Approx(2291226.8350863303).epsilon(1e-12));

    // doubling alpha at ell = 3 divides the bound by (2)^6 = 64
    ComplexityQuery half = q;
    half.alpha = 0.25;
    CHECK(bounds::sample_bound_recovery(half).raw == doctest::Approx(64.0 * b.raw));

    // N = 1 specializes to log(1/delta)/(alpha/4)^{2 ell}
    ComplexityQuery n1 = q;
    n1.N = 1;
    CHECK(bounds::sample_bound_recovery(n1).raw ==
          doctest::Approx(std::log(1.0 / 0.1) / std::pow(0.5 / 4.0, 6.0)));

    CHECK_THROWS_AS(bounds::sample_bound_recovery(ComplexityQuery{0, 3, 0.5, 0.1, 0.1, 1.0}),
                    input_error);
}

TEST_CASE("estimation bound worked value and scalings") {
    ComplexityQuery q;
    q.N = 10;
    q.ell = 3;
    q.alpha = 0.5;
    q.eps = 0.1;
    q.C = 1.0;
    const auto b = bounds::sample_bound_estimation(q);
    // ceil((400 + 3*8^6) * ln 10) at full precision
    CHECK(b.samples == 1811748);
    CHECK(b.raw == doctest::Approx((400.0 + 3.0 * 262144.0) * std::log(10.0)).epsilon(1e-12));

    // halving eps multiplies the 1/(alpha^2 eps^2) term by 4
    ComplexityQuery fine = q;
    fine.eps = 0.05;
    const double first = 1.0 / (0.25 * 0.01);
    const double rest = 3.0 * std::pow(8.0, 6.0);
    CHECK(bounds::sample_bound_estimation(fine).raw ==
          doctest::Approx((4.0 * first + rest) * std::log(10.0)));

    // ell = 2 substitution
    ComplexityQuery forest = q;
    forest.ell = 2;
    CHECK(bounds::sample_bound_estimation(forest).raw ==
          doctest::Approx((first + 2.0 * std::pow(8.0, 4.0)) * std::log(10.0)));
}

TEST_CASE("lower_bound_kernels construction") {
    const auto pair = bounds::lower_bound_kernels(3, 0.125);
    CHECK(pair.kplus.size() == 3);
    CHECK(pair.kplus(0, 0) == 0.5);
    CHECK(pair.kplus(0, 2) == 0.125);
    CHECK(pair.kminus(0, 2) == -0.125);
    CHECK(pair.kplus(0, 1) == pair.kminus(0, 1));
    CHECK(graph::cyclomatic_number(kernel::induced_graph(pair.kplus)) == 1);
    CHECK(graph::cyclomatic_number(kernel::induced_graph(pair.kminus)) == 1);

    // Only the full-cycle monomials see the closing sign, so the determinants
    // differ by 2 * 2(-1)^{ell+1} alpha^ell = 4 alpha^ell on the full set and
    // agree on every proper subset. (ell = 3, alpha = 1/8 -> 0.0078125.)
    const double full_plus = linalg::determinant(pair.kplus.matrix());
    const double full_minus = linalg::determinant(pair.kminus.matrix());
    CHECK(full_plus - full_minus == doctest::Approx(0.0078125).epsilon(1e-13));
    for (std::uint32_t mask = 1; mask < 7; ++mask) {
        std::vector<int> j;
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1) j.push_back(i);
        const double dp = linalg::determinant(linalg::principal_submatrix(pair.kplus.matrix(), j));
        const double dm = linalg::determinant(linalg::principal_submatrix(pair.kminus.matrix(), j));
        CHECK(dp - dm == doctest::Approx(0.0).epsilon(1e-14));
    }

    CHECK_THROWS_AS(bounds::lower_bound_kernels(2, 0.125), input_error);
    CHECK_THROWS_AS(bounds::lower_bound_kernels(3, 0.2), input_error);
}

TEST_CASE("divergence_exhaustive basics") {
    const auto pair = bounds::lower_bound_kernels(3, 0.125);
    const auto self = bounds::divergence_exhaustive(pair.kplus, pair.kplus);
    CHECK(self.kl == doctest::Approx(0.0));
    CHECK(self.hellinger_sq == doctest::Approx(0.0));

    const auto d = bounds::divergence_exhaustive(pair.kplus, pair.kminus);
    CHECK(d.kl > 0.0);
    CHECK(d.kl <= 4.0 * std::pow(6.0 * 0.125, 3.0));
    CHECK(d.hellinger_sq > 0.0);
    CHECK(d.hellinger_sq <= std::pow(8.0 * 0.125 * 0.125, 3.0));

    // every subset probability moves by exactly 4 alpha^ell
    const double shift = 4.0 * std::pow(0.125, 3.0);
    for (std::uint32_t mask = 0; mask < 8; ++mask) {
        std::vector<int> s;
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1) s.push_back(i);
        const double pp = kernel::subset_probability(pair.kplus, s);
        const double pm = kernel::subset_probability(pair.kminus, s);
        CHECK(std::abs(std::abs(pp - pm) - shift) <= 1e-12);
    }
}

TEST_CASE("KL adds across independent blocks") {
    const auto pair = bounds::lower_bound_kernels(3, 0.0625);
    // 6x6 block-diagonal pairs from (K+,K+) vs (K-,K-)
    linalg::SymMatrix a(6), b(6);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            a.set(i, j, pair.kplus(i, j));
            a.set(i + 3, j + 3, pair.kplus(i, j));
            b.set(i, j, pair.kminus(i, j));
            b.set(i + 3, j + 3, pair.kminus(i, j));
        }
    const auto one = bounds::divergence_exhaustive(pair.kplus, pair.kminus);
    const auto two = bounds::divergence_exhaustive(kernel::Kernel::checked(std::move(a)),
                                                   kernel::Kernel::checked(std::move(b)));
    CHECK(two.kl == doctest::Approx(2.0 * one.kl).epsilon(1e-9));
}

TEST_CASE("Gershgorin discs of K - I_Sbar stay in [-3/4,-1/4] U [1/4,3/4]") {
    for (const double alpha : {0.0625, 0.125}) {
        for (const int ell : {3, 4, 5}) {
            const auto pair = bounds::lower_bound_kernels(ell, alpha);
            for (const auto* k : {&pair.kplus, &pair.kminus}) {
                for (std::uint32_t mask = 0; mask < (1u << ell); ++mask) {
                    for (int i = 0; i < ell; ++i) {
                        const double center = (*k)(i, i) - ((mask >> i & 1) ? 0.0 : 1.0);
                        double radius = 0.0;
                        for (int j = 0; j < ell; ++j)
                            if (j != i) radius += std::abs((*k)(i, j));
                        const double lo = center - radius, hi = center + radius;
                        const bool neg = (lo >= -0.75 - 1e-12 && hi <= -0.25 + 1e-12);
                        const bool pos = (lo >= 0.25 - 1e-12 && hi <= 0.75 + 1e-12);
                        CHECK((neg || pos));
                    }
                }
            }
        }
    }
}

TEST_CASE("fano_family structure") {
    const auto family = bounds::fano_family(6, 3, 0.125);
    REQUIRE(family.size() == 3); // K0 plus one per block
    for (const auto& k : family) CHECK(k.size() == 6);
    for (std::size_t j = 1; j < family.size(); ++j) {
        const auto d = bounds::divergence_exhaustive(family[j], family[0]);
        CHECK(d.kl <= 4.0 * std::pow(6.0 * 0.125, 3.0));
        for (int i = 0; i < 6; ++i) CHECK(family[j](i, i) == family[0](i, i));
    }

    // padding: N = 7, ell = 3 -> two blocks plus one zero row/column
    const auto padded = bounds::fano_family(7, 3, 0.125);
    REQUIRE(padded.size() == 3);
    CHECK(padded[0](6, 6) == 0.0);
    CHECK(padded[0](6, 0) == 0.0);
}
