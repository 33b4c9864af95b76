#include "dppmom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dppmom/errors.hpp"

namespace dppmom::linalg {

SymMatrix::SymMatrix(int n) : n_(n), a_(n >= 1 ? std::size_t(n) * n : 0, 0.0) {
    if (n < 1) throw input_error("SymMatrix: dimension must be >= 1");
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = int(rows.size());
    SymMatrix m(n);
    for (const auto& r : rows)
        if (int(r.size()) != n) throw input_error("SymMatrix: ragged or non-square input");
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double x = rows[i][j], y = rows[j][i];
            if (std::abs(x - y) > 1e-9)
                throw input_error("SymMatrix: asymmetry above 1e-9 at (" + std::to_string(i) +
                                  "," + std::to_string(j) + ")");
            m.set(i, j, 0.5 * (x + y));
        }
    }
    return m;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix m(int(d.size()));
    for (int i = 0; i < int(d.size()); ++i) m.set(i, i, d[i]);
    return m;
}

SymMatrix principal_submatrix(const SymMatrix& a, std::span<const int> s) {
    if (s.empty()) throw input_error("principal_submatrix: empty index set");
    std::vector<int> idx(s.begin(), s.end());
    std::sort(idx.begin(), idx.end());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= a.size())
            throw input_error("principal_submatrix: index out of range");
        if (k > 0 && idx[k] == idx[k - 1])
            throw input_error("principal_submatrix: duplicate index");
    }
    SymMatrix m(int(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i; j < idx.size(); ++j)
            m.set(int(i), int(j), a(idx[i], idx[j]));
    return m;
}

double determinant_dense(std::vector<double> m, int n) {
    if (n == 0) return 1.0;
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m[std::size_t(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(m[std::size_t(i) * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(m[std::size_t(piv) * n + j], m[std::size_t(k) * n + j]);
            det = -det;
        }
        const double pivot = m[std::size_t(k) * n + k];
        det *= pivot;
        for (int i = k + 1; i < n; ++i) {
            const double f = m[std::size_t(i) * n + k] / pivot;
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j)
                m[std::size_t(i) * n + j] -= f * m[std::size_t(k) * n + j];
        }
    }
    return det;
}

double determinant(const SymMatrix& a) {
    for (double v : a.data())
        if (!std::isfinite(v)) throw input_error("determinant: non-finite entry");
    return determinant_dense(a.data(), a.size());
}

namespace {

double offdiag_frobenius(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += a[std::size_t(i) * n + j] * a[std::size_t(i) * n + j];
    return std::sqrt(s);
}

} // namespace

EigenDecomposition eig_sym(const SymMatrix& sym) {
    const int n = sym.size();
    std::vector<double> a = sym.data();
    std::vector<double> v(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[std::size_t(i) * n + i] = 1.0;

    const double tol = 1e-12;
    const int max_sweeps = 50;
    bool converged = (n == 1) || offdiag_frobenius(a, n) <= tol;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[std::size_t(p) * n + q];
                if (apq == 0.0) continue;
                const double app = a[std::size_t(p) * n + p];
                const double aqq = a[std::size_t(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta); // avoid overflow in theta*theta
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[std::size_t(p) * n + p] = app - t * apq;
                a[std::size_t(q) * n + q] = aqq + t * apq;
                a[std::size_t(p) * n + q] = 0.0;
                a[std::size_t(q) * n + p] = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a[std::size_t(i) * n + p];
                    const double aiq = a[std::size_t(i) * n + q];
                    a[std::size_t(i) * n + p] = aip - s * (aiq + tau * aip);
                    a[std::size_t(i) * n + q] = aiq + s * (aip - tau * aiq);
                    a[std::size_t(p) * n + i] = a[std::size_t(i) * n + p];
                    a[std::size_t(q) * n + i] = a[std::size_t(i) * n + q];
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v[std::size_t(p) * n + i];
                    const double viq = v[std::size_t(q) * n + i];
                    v[std::size_t(p) * n + i] = vip - s * (viq + tau * vip);
                    v[std::size_t(q) * n + i] = viq + s * (vip - tau * viq);
                }
            }
        }
        converged = offdiag_frobenius(a, n) <= tol;
    }
    if (!converged) throw numeric_error("eig_sym: Jacobi did not converge in 50 sweeps");

    // v above is stored row-per-eigenvector; sort by eigenvalue descending
    // and emit column-major eigenvectors.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a[std::size_t(x) * n + x] > a[std::size_t(y) * n + y];
    });

    EigenDecomposition dec;
    dec.values.resize(n);
    dec.vectors.resize(std::size_t(n) * n);
    for (int k = 0; k < n; ++k) {
        dec.values[k] = a[std::size_t(order[k]) * n + order[k]];
        for (int i = 0; i < n; ++i)
            dec.vectors[std::size_t(k) * n + i] = v[std::size_t(order[k]) * n + i];
    }
    return dec;
}

bool is_valid_kernel(const SymMatrix& a, double tol) {
    const auto dec = eig_sym(a);
    for (double lam : dec.values)
        if (lam < -tol || lam > 1.0 + tol) return false;
    return true;
}

SymMatrix load_kernel_csv(const std::string& path, bool check_spectrum, double tol) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open kernel file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw input_error("bad numeric field in " + path + ": '" + field + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw input_error("empty kernel file: " + path);
    SymMatrix m = SymMatrix::from_rows(rows);
    if (check_spectrum && !is_valid_kernel(m, tol))
        throw input_error("kernel spectrum outside [0,1]: " + path);
    return m;
}

void save_kernel_csv(const SymMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write kernel file: " + path);
    char buf[40];
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < a.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            out << buf << (j + 1 == a.size() ? "" : ",");
        }
        out << "\n";
    }
}

} // namespace dppmom::linalg
