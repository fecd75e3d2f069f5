#pragma once

// Exhaustive enumeration of stencil configurations with exact-integer
// determinants.
//
// Every configuration is evaluated on lattice offsets from the center with unit
// frame scale, so the Vandermonde matrix has small integer entries and its
// determinant can be computed exactly. Two exact routes exist: fraction-free
// (Bareiss) elimination for the report, and cofactor expansion over column
// subsets for cross_check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "cgstencil/grid.hpp"
#include "cgstencil/interp.hpp"
#include "cgstencil/stencil.hpp"

namespace cgstencil {

struct ConfigReport {
    std::size_t id = 0;
    std::string choices;
    std::vector<GridIndex> nodes;  // lattice offsets from the center
    int degree = 2;
    double det = 0.0;              // floating determinant, unit-scaled frame
    std::int64_t exact_det = 0;    // exact integer determinant
    double condition = 0.0;
    bool singular = false;         // |det| < 1e-12
};

inline constexpr double kSingularDet = 1e-12;

struct SweepOptions {
    int threads = 1;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

namespace detail {

using i128 = __int128;

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("exact determinant overflow");
    return r;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("exact determinant overflow");
    return r;
}

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("exact determinant overflow");
    return r;
}

inline std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("exact determinant exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

inline std::int64_t ipow(std::int64_t x, int p) {
    std::int64_t r = 1;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

}  // namespace detail

/// Integer Vandermonde matrix for lattice offsets.
inline IntMatrix integer_vandermonde(const std::vector<GridIndex>& offsets, const MonomialBasis& basis) {
    IntMatrix M(offsets.size(), std::vector<std::int64_t>(static_cast<std::size_t>(basis.size())));
    for (std::size_t r = 0; r < offsets.size(); ++r)
        for (int c = 0; c < basis.size(); ++c) {
            std::int64_t v = 1;
            for (int a = 0; a < basis.dim; ++a)
                v *= detail::ipow(offsets[r][a], basis.exponents[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]);
            M[r][static_cast<std::size_t>(c)] = v;
        }
    return M;
}

/// Exact determinant by Bareiss fraction-free elimination.
inline std::int64_t bareiss_determinant(IntMatrix m) {
    using detail::i128;
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    i128 sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = detail::checked_sub(detail::checked_mul(a[i][j], a[k][k]), detail::checked_mul(a[i][k], a[k][j])) / prev;
        prev = a[k][k];
    }
    return detail::narrow(sign * a[n - 1][n - 1]);
}

/// Exact determinant by Laplace expansion along rows, memoized over used-column subsets.
inline std::int64_t cofactor_determinant(const IntMatrix& m) {
    using detail::i128;
    const std::size_t n = m.size();
    if (n > 20) throw std::invalid_argument("cofactor_determinant: matrix too large");
    // minor[mask] = determinant of the bottom |mask| rows restricted to columns in mask
    std::vector<i128> minor(std::size_t{1} << n, 0);
    minor[0] = 1;
    for (std::size_t mask = 1; mask < minor.size(); ++mask) {
        const auto k = static_cast<std::size_t>(__builtin_popcountll(mask));
        const std::size_t row = n - k;
        i128 acc = 0;
        int pos = 0;  // position of column j among the columns of mask
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const i128 term = detail::checked_mul(m[row][j], minor[mask ^ (std::size_t{1} << j)]);
            acc = (pos % 2 == 0) ? detail::checked_add(acc, term) : detail::checked_sub(acc, term);
            ++pos;
        }
        minor[mask] = acc;
    }
    return detail::narrow(minor.back());
}

namespace detail {

struct RawConfig {
    std::string choices;
    std::vector<GridIndex> nodes;
};

inline ConfigReport evaluate_config(std::size_t id, const RawConfig& raw, const MonomialBasis& basis) {
    ConfigReport r;
    r.id = id;
    r.choices = raw.choices;
    r.nodes = raw.nodes;
    r.degree = basis.degree;
    std::vector<Point> pts;
    for (const auto& g : raw.nodes) {
        Point p = Point::Zero();
        for (int a = 0; a < basis.dim; ++a) p[a] = g[a];
        pts.push_back(p);
    }
    const Eigen::MatrixXd V = assemble_vandermonde(pts, basis, LocalFrame{});
    r.det = V.partialPivLu().determinant();
    r.condition = condition_number(V);
    r.singular = std::abs(r.det) < kSingularDet;
    r.exact_det = bareiss_determinant(integer_vandermonde(raw.nodes, basis));
    return r;
}

inline std::vector<ConfigReport> evaluate_all(const std::vector<RawConfig>& raws, const MonomialBasis& basis,
                                              const SweepOptions& opt) {
    std::vector<ConfigReport> out(raws.size());
    const auto threads = static_cast<std::size_t>(std::max(1, opt.threads));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = evaluate_config(i, raws[i], basis);
    };
    if (threads == 1) {
        work(0, raws.size());
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (raws.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t b = t * chunk, e = std::min(raws.size(), b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
    return out;
}

inline std::string planar_choice(const PlanarQuadratic& q) {
    std::string s = "line=" + to_string(q.line_dir) + ";pair=" + std::to_string(q.pair) + ";subset=";
    for (std::size_t i = 0; i < q.subset.size(); ++i) s += (i ? "-" : "") + std::to_string(q.subset[i]);
    return s;
}

}  // namespace detail

/// All 4 * 8 * C(5,3) = 320 configurations of the improved 2D quadratic algorithm.
inline std::vector<ConfigReport> enumerate_improved_2d(const SweepOptions& opt = {}) {
    std::vector<detail::RawConfig> raws;
    visit_planar_quadratics(LatticePlane::of_2d(GridIndex(0, 0)), nullptr, [&](const PlanarQuadratic& q) {
        raws.push_back({detail::planar_choice(q), q.nodes});
        return false;
    });
    return detail::evaluate_all(raws, MonomialBasis(2, 2), opt);
}

/// All 6 * 8 * 6 * 320 = 92160 configurations of the improved 3D quadratic algorithm.
inline std::vector<ConfigReport> enumerate_improved_3d(const SweepOptions& opt = {}) {
    const GridIndex center(0, 0, 0);
    std::vector<FaceTriple> faces;
    visit_face_triples(center, nullptr, [&](const FaceTriple& t) {
        faces.push_back(t);
        return false;
    });
    std::vector<std::pair<Direction, PlanarQuadratic>> planes;
    for (Direction d : canonical_directions(3))
        visit_planar_quadratics(second_layer_plane(center, d), nullptr, [&](const PlanarQuadratic& q) {
            planes.emplace_back(d, q);
            return false;
        });
    std::vector<detail::RawConfig> raws;
    raws.reserve(faces.size() * planes.size());
    for (const auto& f : faces)
        for (const auto& [d, q] : planes) {
            detail::RawConfig raw;
            raw.choices = "face=" + to_string(f.face_dir) + ";face_pair=" + std::to_string(f.pair) + ";plane=" +
                          to_string(d) + ";" + detail::planar_choice(q);
            raw.nodes.push_back(center);
            raw.nodes.insert(raw.nodes.end(), f.nodes.begin(), f.nodes.end());
            raw.nodes.insert(raw.nodes.end(), q.nodes.begin(), q.nodes.end());
            raws.push_back(std::move(raw));
        }
    return detail::evaluate_all(raws, MonomialBasis(3, 2), opt);
}

/// All 8 * 16 = 128 configurations of the superseded 2D algorithm: center, a
/// consecutive first-ring pair, and three consecutive points of the full second ring.
inline std::vector<ConfigReport> enumerate_original_2d(const SweepOptions& opt = {}) {
    const GridIndex center(0, 0);
    const auto pairs = consecutive_runs(layer_members(center, 1, 2), 2);
    const auto triples = consecutive_runs(layer_members(center, 2, 2), 3);
    std::vector<detail::RawConfig> raws;
    for (std::size_t p = 0; p < pairs.size(); ++p)
        for (std::size_t t = 0; t < triples.size(); ++t) {
            detail::RawConfig raw;
            raw.choices = "pair=" + std::to_string(p) + ";triple=" + std::to_string(t);
            raw.nodes.push_back(center);
            raw.nodes.insert(raw.nodes.end(), pairs[p].begin(), pairs[p].end());
            raw.nodes.insert(raw.nodes.end(), triples[t].begin(), triples[t].end());
            raws.push_back(std::move(raw));
        }
    return detail::evaluate_all(raws, MonomialBasis(2, 2), opt);
}

/// Independent exact verdict: does the singular flag agree with a cofactor-expansion determinant?
inline bool cross_check(const ConfigReport& report) {
    const int dim = report.nodes.empty() ? 2 : report.nodes.front().dim;
    const MonomialBasis basis(dim, report.degree);
    const std::int64_t exact = cofactor_determinant(integer_vandermonde(report.nodes, basis));
    return report.singular == (exact == 0);
}

/// Coefficients (in the unit lattice frame) of a nonzero polynomial vanishing on the report's
/// nodes; for a non-singular configuration the result does not vanish.
inline Eigen::VectorXd vanishing_polynomial(const ConfigReport& report) {
    const int dim = report.nodes.empty() ? 2 : report.nodes.front().dim;
    const MonomialBasis basis(dim, report.degree);
    std::vector<Point> pts;
    for (const auto& g : report.nodes) {
        Point p = Point::Zero();
        for (int a = 0; a < dim; ++a) p[a] = g[a];
        pts.push_back(p);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(assemble_vandermonde(pts, basis, LocalFrame{}), Eigen::ComputeFullV);
    return svd.matrixV().col(svd.matrixV().cols() - 1);
}

namespace detail {

inline std::vector<GridIndex> sorted_nodes(std::vector<GridIndex> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// The 8 symmetries of the square lattice about the origin.
inline GridIndex dihedral(const GridIndex& g, int t) {
    int x = g[0], y = g[1];
    if (t & 4) std::swap(x, y);
    if (t & 1) x = -x;
    if (t & 2) y = -y;
    return GridIndex(x, y);
}

}  // namespace detail

/// True if the set of singular 2D configurations (as node sets) is closed under the dihedral group.
inline bool singular_set_dihedral_closed(const std::vector<ConfigReport>& reports) {
    std::set<std::vector<GridIndex>> singular;
    for (const auto& r : reports)
        if (r.singular) singular.insert(detail::sorted_nodes(r.nodes));
    for (const auto& nodes : singular)
        for (int t = 0; t < 8; ++t) {
            std::vector<GridIndex> image;
            for (const auto& g : nodes) image.push_back(detail::dihedral(g, t));
            if (!singular.count(detail::sorted_nodes(image))) return false;
        }
    return true;
}

struct SweepSummary {
    std::size_t count = 0;
    std::size_t singular = 0;
    std::size_t exact_zero = 0;
    double min_abs_det = std::numeric_limits<double>::infinity();
    double max_condition_nonsingular = 0.0;
};

inline SweepSummary summarize(const std::vector<ConfigReport>& reports) {
    SweepSummary s;
    s.count = reports.size();
    for (const auto& r : reports) {
        s.singular += r.singular ? 1 : 0;
        s.exact_zero += r.exact_det == 0 ? 1 : 0;
        s.min_abs_det = std::min(s.min_abs_det, std::abs(r.det));
        if (!r.singular) s.max_condition_nonsingular = std::max(s.max_condition_nonsingular, r.condition);
    }
    return s;
}

inline std::string nodes_string(const std::vector<GridIndex>& nodes) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? " " : "") + to_string(nodes[i]);
    return s;
}

inline void write_report_csv(std::ostream& os, const std::vector<ConfigReport>& reports) {
    os << "id,choices,det,exact_det,condition,singular,nodes\n";
    for (const auto& r : reports) {
        os << r.id << ',' << r.choices << ',' << std::setprecision(17) << r.det << ',' << r.exact_det << ',';
        if (std::isinf(r.condition))
            os << "inf";
        else
            os << std::setprecision(10) << r.condition;
        os << ',' << (r.singular ? 1 : 0) << ",\"" << nodes_string(r.nodes) << "\"\n";
    }
}

}  // namespace cgstencil
