#pragma once

// Monomial-basis interpolation on a stencil: Vandermonde assembly, exact
// (square) fit, evaluation, gradient, and linear functionals of nodal values.
//
// Node coordinates enter the Vandermonde matrix in a local frame,
// xi = (x - origin) / scale, which keeps entries O(1) under refinement.
// Coefficients are stored in that frame.

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cgstencil/errors.hpp"
#include "cgstencil/grid.hpp"
#include "cgstencil/stencil.hpp"

namespace cgstencil {

/// Graded-lexicographic monomials: degree ascending, then x exponent descending,
/// then y exponent descending. 2D quadratic: 1, x, y, x^2, xy, y^2.
struct MonomialBasis {
    int dim = 2;
    int degree = 2;
    std::vector<std::array<int, 3>> exponents;

    MonomialBasis(int dim_, int degree_) : dim(dim_), degree(degree_) {
        if (dim != 2 && dim != 3) throw std::invalid_argument("MonomialBasis: dim must be 2 or 3");
        if (degree < 0 || degree > 3) throw std::invalid_argument("MonomialBasis: degree must be in [0, 3]");
        for (int t = 0; t <= degree; ++t) {
            if (dim == 2) {
                for (int ex = t; ex >= 0; --ex) exponents.push_back({ex, t - ex, 0});
            } else {
                for (int ex = t; ex >= 0; --ex)
                    for (int ey = t - ex; ey >= 0; --ey) exponents.push_back({ex, ey, t - ex - ey});
            }
        }
    }

    int size() const { return static_cast<int>(exponents.size()); }

    /// Values of all monomials at local coordinates xi.
    Eigen::VectorXd values(const Point& xi) const {
        Eigen::VectorXd v(size());
        for (int c = 0; c < size(); ++c) v[c] = monomial(c, xi);
        return v;
    }

    double monomial(int c, const Point& xi) const {
        const auto& e = exponents[static_cast<std::size_t>(c)];
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= ipow(xi[a], e[static_cast<std::size_t>(a)]);
        return v;
    }

    /// d/dxi_axis of monomial c at xi.
    double derivative(int c, int axis, const Point& xi) const {
        const auto& e = exponents[static_cast<std::size_t>(c)];
        const int p = e[static_cast<std::size_t>(axis)];
        if (p == 0) return 0.0;
        double v = p;
        for (int a = 0; a < dim; ++a) v *= ipow(xi[a], e[static_cast<std::size_t>(a)] - (a == axis ? 1 : 0));
        return v;
    }

private:
    static double ipow(double x, int p) {
        double r = 1.0;
        for (int i = 0; i < p; ++i) r *= x;
        return r;
    }
};

struct LocalFrame {
    Point origin = Point::Zero();
    double scale = 1.0;

    Point to_local(const Point& x) const { return (x - origin) / scale; }
};

struct PolyFit {
    MonomialBasis basis;
    LocalFrame frame;
    Eigen::VectorXd coeffs;
    double condition = 0.0;
};

inline Eigen::MatrixXd assemble_vandermonde(std::span<const Point> nodes, const MonomialBasis& basis,
                                            const LocalFrame& frame) {
    if (static_cast<int>(nodes.size()) != basis.size())
        throw std::invalid_argument("assemble_vandermonde: node count must equal basis size");
    Eigen::MatrixXd V(basis.size(), basis.size());
    for (int r = 0; r < basis.size(); ++r) V.row(r) = basis.values(frame.to_local(nodes[static_cast<std::size_t>(r)])).transpose();
    return V;
}

/// 2-norm condition number; infinity when the smallest singular value is zero.
inline double condition_number(const Eigen::MatrixXd& V) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 1.0;
    const double smin = s[s.size() - 1];
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s[0] / smin;
}

namespace detail {

inline constexpr double kRankTolerance = 1e-12;

// Pivoted LU of the Vandermonde matrix, rejecting rank-deficient systems.
inline Eigen::PartialPivLU<Eigen::MatrixXd> factor_checked(const Eigen::MatrixXd& V) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
    const auto& LU = lu.matrixLU();
    const double umax = LU.triangularView<Eigen::Upper>().toDenseMatrix().cwiseAbs().maxCoeff();
    for (int i = 0; i < LU.rows(); ++i) {
        if (!(std::abs(LU(i, i)) > kRankTolerance * umax))
            throw SingularSystem("Vandermonde matrix is rank deficient (pivot " + std::to_string(i) + ")");
    }
    return lu;
}

}  // namespace detail

inline PolyFit fit(std::span<const Point> nodes, std::span<const double> values, const MonomialBasis& basis,
                   const LocalFrame& frame) {
    if (nodes.size() != values.size()) throw std::invalid_argument("fit: node/value count mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("fit: non-finite value");
    const Eigen::MatrixXd V = assemble_vandermonde(nodes, basis, frame);
    auto lu = detail::factor_checked(V);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return PolyFit{basis, frame, lu.solve(rhs), condition_number(V)};
}

inline double evaluate(const PolyFit& f, const Point& p) { return f.basis.values(f.frame.to_local(p)).dot(f.coeffs); }

/// Gradient in physical units.
inline Eigen::VectorXd gradient(const PolyFit& f, const Point& p) {
    const Point xi = f.frame.to_local(p);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(f.basis.dim);
    for (int a = 0; a < f.basis.dim; ++a)
        for (int c = 0; c < f.basis.size(); ++c) g[a] += f.coeffs[c] * f.basis.derivative(c, a, xi);
    return g / f.frame.scale;
}

/// A factored stencil that maps linear functionals of the interpolant to nodal weights.
/// For a functional given by its action g on each monomial, the weights w satisfy
/// sum_i w_i v_i = g . coeffs(v) for all nodal values v, i.e. V^T w = g.
class StencilFunctional {
public:
    StencilFunctional(std::vector<Point> nodes, MonomialBasis basis, LocalFrame frame)
        : nodes_(std::move(nodes)), basis_(std::move(basis)), frame_(frame) {
        const Eigen::MatrixXd V = assemble_vandermonde(nodes_, basis_, frame_);
        lu_ = detail::factor_checked(V);
        condition_ = condition_number(V);
    }

    const std::vector<Point>& nodes() const { return nodes_; }
    const MonomialBasis& basis() const { return basis_; }
    const LocalFrame& frame() const { return frame_; }
    double condition() const { return condition_; }

    Eigen::VectorXd weights(const Eigen::VectorXd& monomial_action) const { return lu_.transpose().solve(monomial_action); }

    /// Weights reproducing the interpolant's value at p.
    Eigen::VectorXd value_weights(const Point& p) const { return weights(basis_.values(frame_.to_local(p))); }

    /// Weights reproducing (1/rho) * normal . grad(interpolant) at p.
    Eigen::VectorXd normal_flux_weights(const Point& p, const Point& normal, double rho) const {
        const Point xi = frame_.to_local(p);
        Eigen::VectorXd g(basis_.size());
        for (int c = 0; c < basis_.size(); ++c) {
            double s = 0.0;
            for (int a = 0; a < basis_.dim; ++a) s += normal[a] * basis_.derivative(c, a, xi);
            g[c] = s / (frame_.scale * rho);
        }
        return weights(g);
    }

private:
    std::vector<Point> nodes_;
    MonomialBasis basis_;
    LocalFrame frame_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double condition_ = 0.0;
};

/// Weights w with sum_i w_i v_i = (1/rho) n . grad(fit(v)) at `at`.
inline Eigen::VectorXd normal_flux_functional(std::span<const Point> nodes, const MonomialBasis& basis,
                                              const LocalFrame& frame, const Point& at, const Point& normal,
                                              double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("normal_flux_functional: rho must be positive");
    if (std::abs(normal.norm() - 1.0) > 1e-12) throw std::invalid_argument("normal_flux_functional: normal must be unit");
    return StencilFunctional({nodes.begin(), nodes.end()}, basis, frame).normal_flux_weights(at, normal, rho);
}

/// Physical cell-center coordinates of a selection's nodes.
inline std::vector<Point> node_points(const StencilSelection& sel, const GridSpec& grid) {
    std::vector<Point> pts;
    pts.reserve(sel.nodes.size());
    for (const auto& g : sel.nodes) pts.push_back(grid.cell_center(g));
    return pts;
}

/// Lattice coordinates of a selection's nodes relative to its center (unit spacing).
inline std::vector<Point> lattice_offsets(const StencilSelection& sel) {
    std::vector<Point> pts;
    pts.reserve(sel.nodes.size());
    for (const auto& g : sel.nodes) {
        Point p = Point::Zero();
        for (int a = 0; a < sel.dim; ++a) p[a] = g[a] - sel.local_origin[a];
        pts.push_back(p);
    }
    return pts;
}

}  // namespace cgstencil
