#include "dppmom/gf2.hpp"

#include <algorithm>
#include <bit>

#include "dppmom/errors.hpp"

namespace dppmom::gf2 {

Gf2Vector& Gf2Vector::operator^=(const Gf2Vector& o) {
    if (o.len_ != len_) throw input_error("Gf2Vector: dimension mismatch in xor");
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
}

int Gf2Vector::popcount() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
}

int Gf2Vector::first_set() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i]) return int(i * 64) + std::countr_zero(w_[i]);
    return -1;
}

bool Gf2Vector::lex_less(const Gf2Vector& a, const Gf2Vector& b) {
    const std::size_t n = std::min(a.w_.size(), b.w_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t d = a.w_[i] ^ b.w_[i];
        if (d) {
            const int bit = std::countr_zero(d);
            return !((a.w_[i] >> bit) & 1u); // 0 at the first differing bit => smaller
        }
    }
    return a.w_.size() < b.w_.size();
}

Gf2Matrix Gf2Matrix::from_rows(std::vector<Gf2Vector> rows) {
    const int r = int(rows.size());
    const int c = r ? rows[0].size() : 0;
    for (const auto& v : rows)
        if (v.size() != c) throw input_error("Gf2Matrix: ragged rows");
    Gf2Matrix m(r, c);
    for (int i = 0; i < r; ++i) m.row(i) = std::move(rows[i]);
    return m;
}

bool EchelonBasis::rank_increment(Gf2Vector v) {
    if (v.size() != cols_) throw input_error("rank_increment: dimension mismatch");
    for (const auto& pr : rows_)
        if (v.get(pr.pivot)) v ^= pr.row;
    const int p = v.first_set();
    if (p < 0) return false;
    for (auto& pr : rows_)
        if (pr.row.get(p)) pr.row ^= v;
    auto it = std::lower_bound(rows_.begin(), rows_.end(), p,
                               [](const PivotRow& r, int x) { return r.pivot < x; });
    rows_.insert(it, PivotRow{p, std::move(v)});
    return true;
}

bool EchelonBasis::reduces_to_zero(Gf2Vector v) const {
    if (v.size() != cols_) throw input_error("reduces_to_zero: dimension mismatch");
    for (const auto& pr : rows_)
        if (v.get(pr.pivot)) v ^= pr.row;
    return !v.any();
}

std::optional<Gf2Vector> solve(const Gf2Matrix& a, const Gf2Vector& b) {
    if (a.rows() != b.size()) throw input_error("gf2::solve: dimension mismatch");
    const int rows = a.rows(), cols = a.cols();
    std::vector<Gf2Vector> m(rows);
    for (int i = 0; i < rows; ++i) m[i] = a.row(i);
    std::vector<bool> rhs(rows);
    for (int i = 0; i < rows; ++i) rhs[i] = b.get(i);

    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (m[i].get(c)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[sel], m[r]);
        std::swap(rhs[sel], rhs[r]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !m[i].get(c)) continue;
            m[i] ^= m[r];
            rhs[i] = rhs[i] != rhs[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        if (rhs[i]) return std::nullopt;

    Gf2Vector x(cols);
    for (int i = 0; i < r; ++i)
        if (rhs[i]) x.set(pivot_col[i], true);
    return x;
}

} // namespace dppmom::gf2
