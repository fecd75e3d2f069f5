#pragma once

// Row-compressed sparse systems, Jacobi-preconditioned BiCGStab, a dense
// direct solver for small systems, and Matrix Market coordinate I/O.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cgstencil/errors.hpp"

namespace cgstencil {

struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> row_ptr{0};
    std::vector<int> col;
    std::vector<double> val;

    std::int64_t nnz() const { return static_cast<std::int64_t>(val.size()); }

    int row_nnz(int r) const { return static_cast<int>(row_ptr[static_cast<std::size_t>(r) + 1] - row_ptr[static_cast<std::size_t>(r)]); }

    double diagonal(int r) const {
        for (auto k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            if (col[static_cast<std::size_t>(k)] == r) return val[static_cast<std::size_t>(k)];
        return 0.0;
    }

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        y.assign(static_cast<std::size_t>(rows), 0.0);
        for (int r = 0; r < rows; ++r) {
            double s = 0.0;
            for (auto k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
                s += val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
            y[static_cast<std::size_t>(r)] = s;
        }
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (auto k = row_ptr[static_cast<std::size_t>(r)]; k < row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
                D(r, col[static_cast<std::size_t>(k)]) += val[static_cast<std::size_t>(k)];
        return D;
    }
};

/// Accumulates (row, col, value) entries; duplicates are summed on build.
class TripletBuilder {
public:
    explicit TripletBuilder(int rows, int cols = -1) : rows_(rows), cols_(cols < 0 ? rows : cols) {}

    void add(int r, int c, double v) {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("TripletBuilder: index out of range");
        entries_.push_back({r, c, v});
    }

    /// Sorted, merged CSR; entries with magnitude below 1e-30 are dropped.
    CsrMatrix build() const {
        auto e = entries_;
        std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });
        CsrMatrix m;
        m.rows = rows_;
        m.cols = cols_;
        m.row_ptr.assign(static_cast<std::size_t>(rows_) + 1, 0);
        std::size_t i = 0;
        for (int r = 0; r < rows_; ++r) {
            while (i < e.size() && e[i].r == r) {
                const int c = e[i].c;
                double v = 0.0;
                while (i < e.size() && e[i].r == r && e[i].c == c) v += e[i++].v;
                if (std::abs(v) >= 1e-30) {
                    m.col.push_back(c);
                    m.val.push_back(v);
                }
            }
            m.row_ptr[static_cast<std::size_t>(r) + 1] = static_cast<std::int64_t>(m.val.size());
        }
        return m;
    }

private:
    struct Entry {
        int r, c;
        double v;
    };
    int rows_, cols_;
    std::vector<Entry> entries_;
};

struct SparseSystem {
    CsrMatrix A;
    std::vector<double> rhs;

    int n_unknowns() const { return A.rows; }
};

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// ||b - A x||_2 / ||b||_2 (absolute norm when b = 0).
inline double relative_residual(const SparseSystem& sys, const std::vector<double>& x) {
    std::vector<double> ax;
    sys.A.multiply(x, ax);
    double rr = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double d = sys.rhs[i] - ax[i];
        rr += d * d;
    }
    const double bn = norm2(sys.rhs);
    return bn > 0.0 ? std::sqrt(rr) / bn : std::sqrt(rr);
}

struct SolveStats {
    int iterations = 0;
    int restarts = 0;
    double residual = 0.0;  // recomputed from an explicit mat-vec on the returned x
    std::map<int, std::int64_t> nnz_histogram;
};

struct SolveResult {
    std::vector<double> x;
    SolveStats stats;
};

inline std::map<int, std::int64_t> nnz_histogram(const CsrMatrix& A) {
    std::map<int, std::int64_t> h;
    for (int r = 0; r < A.rows; ++r) ++h[A.row_nnz(r)];
    return h;
}

/// BiCGStab with Jacobi preconditioning. Restarts from the current iterate on
/// breakdown or when the recurrence residual drifts from the true residual.
inline SolveResult solve(const SparseSystem& sys, double tol = 1e-10, int max_iter = 20000) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    const auto n = static_cast<std::size_t>(sys.n_unknowns());
    if (sys.rhs.size() != n) throw std::invalid_argument("solve: rhs length mismatch");

    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = sys.A.diagonal(static_cast<int>(i));
        if (d == 0.0) throw ZeroDiagonal("row " + std::to_string(i) + " has no diagonal entry");
        inv_diag[i] = 1.0 / d;
    }

    SolveResult out;
    out.x.assign(n, 0.0);
    out.stats.nnz_histogram = nnz_histogram(sys.A);
    const double bnorm = norm2(sys.rhs);
    if (bnorm == 0.0) return out;

    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    std::vector<double>& x = out.x;
    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n), ax;
    int it = 0;
    constexpr int kMaxRestarts = 50;
    for (int restart = 0; restart <= kMaxRestarts && it < max_iter; ++restart) {
        out.stats.restarts = restart;
        sys.A.multiply(x, ax);
        for (std::size_t i = 0; i < n; ++i) r[i] = sys.rhs[i] - ax[i];
        if (norm2(r) / bnorm <= tol) break;
        r0 = r;
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        while (it < max_iter) {
            ++it;
            const double rho_new = dot(r0, r);
            if (rho_new == 0.0 || !std::isfinite(rho_new)) break;
            const double beta = (rho_new / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
            for (std::size_t i = 0; i < n; ++i) phat[i] = inv_diag[i] * p[i];
            sys.A.multiply(phat, v);
            const double r0v = dot(r0, v);
            if (r0v == 0.0 || !std::isfinite(r0v)) break;
            alpha = rho_new / r0v;
            for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
            if (norm2(s) / bnorm <= tol) {
                for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
                break;
            }
            for (std::size_t i = 0; i < n; ++i) shat[i] = inv_diag[i] * s[i];
            sys.A.multiply(shat, t);
            const double tt = dot(t, t);
            omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
            for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
            rho = rho_new;
            if (norm2(r) / bnorm <= tol || omega == 0.0) break;
        }
        if (relative_residual(sys, x) <= tol) break;
    }
    out.stats.iterations = it;
    out.stats.residual = relative_residual(sys, x);
    if (!(out.stats.residual <= tol))
        throw SolverDiverged("relative residual " + std::to_string(out.stats.residual) + " after " +
                             std::to_string(it) + " iterations");
    return out;
}

/// Pivoted dense LU solve; intended for small systems and as a cross-check.
inline std::vector<double> dense_solve(const SparseSystem& sys) {
    const int n = sys.n_unknowns();
    if (n > 5000) throw std::invalid_argument("dense_solve: system too large for a dense factorization");
    const Eigen::MatrixXd D = sys.A.to_dense();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
    if (!(lu.rcond() > 1e-15)) throw SingularSystem("dense system is numerically singular");
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), n);
    const Eigen::VectorXd x = lu.solve(b);
    return {x.data(), x.data() + n};
}

/// Matrix Market coordinate format (1-based indices).
inline void write_matrix_market(std::ostream& os, const CsrMatrix& A) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << A.rows << ' ' << A.cols << ' ' << A.nnz() << '\n';
    os.precision(17);
    for (int r = 0; r < A.rows; ++r)
        for (auto k = A.row_ptr[static_cast<std::size_t>(r)]; k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            os << r + 1 << ' ' << A.col[static_cast<std::size_t>(k)] + 1 << ' ' << A.val[static_cast<std::size_t>(k)] << '\n';
}

inline void write_vector_market(std::ostream& os, const std::vector<double>& v) {
    os << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
    os.precision(17);
    for (double x : v) os << x << '\n';
}

namespace detail {

inline std::string next_data_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '%') return line;
    throw std::runtime_error("matrix market: unexpected end of input");
}

}  // namespace detail

inline CsrMatrix read_matrix_market(std::istream& is) {
    std::string header;
    std::getline(is, header);
    if (header.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0)
        throw std::runtime_error("matrix market: unsupported header '" + header + "'");
    std::istringstream dims(detail::next_data_line(is));
    int rows = 0, cols = 0;
    std::int64_t nnz = 0;
    dims >> rows >> cols >> nnz;
    TripletBuilder tb(rows, cols);
    for (std::int64_t k = 0; k < nnz; ++k) {
        std::istringstream ln(detail::next_data_line(is));
        int r = 0, c = 0;
        double v = 0.0;
        ln >> r >> c >> v;
        tb.add(r - 1, c - 1, v);
    }
    return tb.build();
}

inline std::vector<double> read_vector_market(std::istream& is) {
    std::string header;
    std::getline(is, header);
    if (header.rfind("%%MatrixMarket matrix array real general", 0) != 0)
        throw std::runtime_error("matrix market: unsupported header '" + header + "'");
    std::istringstream dims(detail::next_data_line(is));
    std::size_t rows = 0, cols = 0;
    dims >> rows >> cols;
    std::vector<double> v(rows);
    for (auto& x : v) x = std::stod(detail::next_data_line(is));
    return v;
}

}  // namespace cgstencil
