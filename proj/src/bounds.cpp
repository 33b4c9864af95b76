#include "dppmom/bounds.hpp"

#include <cmath>

#include "dppmom/errors.hpp"

namespace dppmom::bounds {

using kernel::Kernel;
using linalg::SymMatrix;

namespace {

void check_query(const ComplexityQuery& q) {
    if (q.N < 1) throw input_error("bounds: N must be >= 1");
    if (q.ell < 2) throw input_error("bounds: ell must be >= 2");
    if (q.alpha <= 0.0 || q.alpha >= 1.0) throw input_error("bounds: alpha must be in (0,1)");
    if (q.delta <= 0.0 || q.delta >= 1.0) throw input_error("bounds: delta must be in (0,1)");
    if (q.eps <= 0.0) throw input_error("bounds: eps must be > 0");
    if (q.C <= 0.0) throw input_error("bounds: C must be > 0");
}

BoundValue ceil_value(double raw) {
    BoundValue b;
    b.raw = raw;
    b.samples = static_cast<long long>(std::ceil(raw));
    return b;
}

} // namespace

BoundValue sample_bound_recovery(const ComplexityQuery& q) {
    check_query(q);
    const double logterm = double(q.ell + 1) * std::log(double(q.N)) - std::log(q.delta);
    const double denom = std::pow(q.alpha / 4.0, 2.0 * q.ell);
    return ceil_value(logterm / denom);
}

BoundValue sample_bound_estimation(const ComplexityQuery& q) {
    check_query(q);
    const double first = 1.0 / (q.alpha * q.alpha * q.eps * q.eps);
    const double second = double(q.ell) * std::pow(4.0 / q.alpha, 2.0 * q.ell);
    return ceil_value(q.C * (first + second) * std::log(double(q.N)));
}

LowerBoundKernelPair lower_bound_kernels(int ell, double alpha) {
    if (ell < 3) throw input_error("lower_bound_kernels: ell must be >= 3");
    if (alpha <= 0.0 || alpha > 0.125)
        throw input_error("lower_bound_kernels: alpha must be in (0, 1/8]");
    SymMatrix plus(ell), minus(ell);
    for (int i = 0; i < ell; ++i) {
        plus.set(i, i, 0.5);
        minus.set(i, i, 0.5);
        if (i + 1 < ell) {
            plus.set(i, i + 1, alpha);
            minus.set(i, i + 1, alpha);
        }
    }
    plus.set(0, ell - 1, alpha);
    minus.set(0, ell - 1, -alpha);
    return LowerBoundKernelPair{Kernel::checked(std::move(plus), alpha),
                                Kernel::checked(std::move(minus), alpha)};
}

DivergencePair divergence_exhaustive(const Kernel& k1, const Kernel& k2) {
    const int n = k1.size();
    if (n != k2.size()) throw input_error("divergence_exhaustive: dimension mismatch");
    if (n > 16) throw capability_error("divergence_exhaustive: enumeration capped at N <= 16");

    DivergencePair out;
    std::vector<int> subset;
    const std::size_t cells = std::size_t(1) << n;
    for (std::size_t mask = 0; mask < cells; ++mask) {
        subset.clear();
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) subset.push_back(i);
        const double p = kernel::subset_probability(k1, subset);
        const double q = kernel::subset_probability(k2, subset);
        if (p > 0.0 && q == 0.0) {
            std::string s = "{";
            for (int i : subset) s += std::to_string(i + 1) + ",";
            s += "}";
            throw input_error("divergence_exhaustive: KL support violation at subset " + s);
        }
        if (p > 0.0) out.kl += p * std::log(p / q);
        const double d = std::sqrt(p) - std::sqrt(q);
        out.hellinger_sq += d * d;
    }
    return out;
}

std::vector<Kernel> fano_family(int N, int ell, double alpha) {
    if (N < ell) throw input_error("fano_family: N must be >= ell");
    const LowerBoundKernelPair pair = lower_bound_kernels(ell, alpha);
    const int blocks = N / ell; // zero padding covers the remainder

    auto build = [&](int minus_block) {
        SymMatrix m(N);
        for (int b = 0; b < blocks; ++b) {
            const Kernel& src = (b == minus_block) ? pair.kminus : pair.kplus;
            const int off = b * ell;
            for (int i = 0; i < ell; ++i)
                for (int j = i; j < ell; ++j) m.set(off + i, off + j, src(i, j));
        }
        return Kernel::checked(std::move(m), alpha);
    };

    std::vector<Kernel> family;
    family.reserve(blocks + 1);
    family.push_back(build(-1));
    for (int j = 0; j < blocks; ++j) family.push_back(build(j));
    return family;
}

} // namespace dppmom::bounds
