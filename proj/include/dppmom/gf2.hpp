#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace dppmom::gf2 {

/// Packed bit vector over GF(2). Bit i of word i/64 is coordinate i;
/// out-of-range bits are kept zero so word-wise XOR is safe.
class Gf2Vector {
  public:
    Gf2Vector() = default;
    explicit Gf2Vector(int len) : len_(len), w_((len + 63) / 64, 0) {}

    int size() const { return len_; }

    bool get(int i) const { return (w_[std::size_t(i) >> 6] >> (i & 63)) & 1u; }

    void set(int i, bool v) {
        const std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (v)
            w_[std::size_t(i) >> 6] |= m;
        else
            w_[std::size_t(i) >> 6] &= ~m;
    }

    Gf2Vector& operator^=(const Gf2Vector& o);

    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }

    int popcount() const;

    /// Index of the lowest set bit, or -1.
    int first_set() const;

    bool operator==(const Gf2Vector& o) const = default;

    /// Lexicographic order on the bit string b0 b1 b2 ... (0 < 1).
    static bool lex_less(const Gf2Vector& a, const Gf2Vector& b);

    const std::vector<std::uint64_t>& words() const { return w_; }

  private:
    int len_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Dense bit matrix, row-major packed rows.
class Gf2Matrix {
  public:
    Gf2Matrix(int rows, int cols) : rows_(rows), cols_(cols), r_(rows, Gf2Vector(cols)) {}

    static Gf2Matrix from_rows(std::vector<Gf2Vector> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const { return r_[r].get(c); }
    void set(int r, int c, bool v) { r_[r].set(c, v); }

    const Gf2Vector& row(int r) const { return r_[r]; }
    Gf2Vector& row(int r) { return r_[r]; }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Gf2Vector> r_;
};

/**
 * Incremental reduced-row-echelon accumulator; the independence filter of
 * the cycle-basis greedy pass feeds candidate incidence vectors through
 * rank_increment one by one.
 */
class EchelonBasis {
  public:
    explicit EchelonBasis(int cols) : cols_(cols) {}

    /// Absorbs v if it is independent of the accumulated rows and returns
    /// true; returns false (accumulator unchanged) otherwise.
    bool rank_increment(Gf2Vector v);

    /// Membership test against the accumulated span.
    bool reduces_to_zero(Gf2Vector v) const;

    int rank() const { return int(rows_.size()); }
    int cols() const { return cols_; }

  private:
    struct PivotRow {
        int pivot;
        Gf2Vector row;
    };
    int cols_ = 0;
    std::vector<PivotRow> rows_; // sorted by pivot, kept fully reduced
};

/// Gaussian elimination on [A|b]. Returns a solution of Ax=b with all free
/// variables set to 0 (deterministic), or nullopt when the system is
/// inconsistent.
std::optional<Gf2Vector> solve(const Gf2Matrix& a, const Gf2Vector& b);

} // namespace dppmom::gf2
