#pragma once

#include <span>
#include <string>
#include <vector>

namespace dppmom::linalg {

/**
 * Dense symmetric matrix with value semantics. Symmetry is enforced at
 * construction: inputs are rejected when |a_ij - a_ji| > 1e-9 and stored as
 * (a_ij + a_ji)/2 so that file round-trips cannot introduce asymmetry.
 * Indices are 0-based throughout the library; 1-based only in file formats.
 */
class SymMatrix {
  public:
    explicit SymMatrix(int n);

    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static SymMatrix identity(int n);
    static SymMatrix diagonal(std::span<const double> d);

    int size() const { return n_; }

    double operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

    /// Sets both (i,j) and (j,i).
    void set(int i, int j, double v) {
        a_[std::size_t(i) * n_ + j] = v;
        a_[std::size_t(j) * n_ + i] = v;
    }

    const std::vector<double>& data() const { return a_; }

    bool operator==(const SymMatrix& o) const = default;

  private:
    int n_ = 0;
    std::vector<double> a_; // row-major, both triangles kept in sync

    friend SymMatrix principal_submatrix(const SymMatrix&, std::span<const int>);
};

struct EigenDecomposition {
    std::vector<double> values;  // descending
    std::vector<double> vectors; // column-major n*n; column k is the k-th eigenvector

    double vec(int i, int k, int n) const { return vectors[std::size_t(k) * n + i]; }
};

/// Rows/columns restricted to S, in ascending index order. S must be a
/// nonempty duplicate-free subset of [n].
SymMatrix principal_submatrix(const SymMatrix& a, std::span<const int> s);

/// LU with partial pivoting; det of the 0x0 matrix is 1 (empty product), so
/// inclusion-exclusion sums over subsets stay uniform.
double determinant(const SymMatrix& a);
double determinant_dense(std::vector<double> m, int n); // same routine on a raw buffer

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
/// 1e-12, at most 50 sweeps (then numeric_error). Values descending,
/// vectors orthonormal.
EigenDecomposition eig_sym(const SymMatrix& a);

/// True iff every eigenvalue lies in [-tol, 1+tol].
bool is_valid_kernel(const SymMatrix& a, double tol);

/// Kernel file format: plain-text CSV, N rows of N decimal fields.
/// The loader validates symmetry and, optionally, the spectrum.
SymMatrix load_kernel_csv(const std::string& path, bool check_spectrum = false,
                          double tol = 1e-9);
void save_kernel_csv(const SymMatrix& a, const std::string& path);

} // namespace dppmom::linalg
