#pragma once

// Cell classification and cut-cell geometry from a level set.
//
// Component a is {phi < 0}, component b is {phi > 0}. A cell whose corner
// values of phi all share a sign belongs to that component; mixed signs make
// it a partial cell. Inside a partial cell phi is replaced by its
// least-squares linear fit through the corner values, and the volume, face
// apertures, and interface patch are computed exactly for that plane by
// clipping the cell polytope.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "cgstencil/errors.hpp"
#include "cgstencil/grid.hpp"

namespace cgstencil {

enum class Component { A = 0, B = 1 };

inline constexpr int idx(Component c) { return static_cast<int>(c); }
inline constexpr Component other(Component c) { return c == Component::A ? Component::B : Component::A; }

struct LevelSetGeometry {
    std::function<double(const Point&)> phi;
    std::function<Point(const Point&)> grad;

    /// phi = |x - center| - radius; negative inside.
    static LevelSetGeometry sphere(const Point& center, double radius) {
        return {[=](const Point& x) { return (x - center).norm() - radius; },
                [=](const Point& x) {
                    const Point d = x - center;
                    const double r = d.norm();
                    return r > 0.0 ? Point(d / r) : Point(Point::UnitX());
                }};
    }

    /// phi = normal . x - offset.
    static LevelSetGeometry plane(const Point& normal, double offset) {
        return {[=](const Point& x) { return normal.dot(x) - offset; }, [=](const Point&) { return normal; }};
    }

    static LevelSetGeometry constant(double value) {
        return {[=](const Point&) { return value; }, [](const Point&) { return Point(Point::UnitX()); }};
    }
};

enum class CellClass { External, Internal, Boundary, Partial };

inline const char* to_string(CellClass c) {
    switch (c) {
        case CellClass::External: return "external";
        case CellClass::Internal: return "internal";
        case CellClass::Boundary: return "boundary";
        case CellClass::Partial: return "partial";
    }
    return "?";
}

/// Face f of a cell: axis f / 2, low side when f is even.
inline constexpr int face_id(int axis, int sign) { return 2 * axis + (sign > 0 ? 1 : 0); }

struct CutGeometry {
    std::array<double, 2> volume{};             // per component
    std::array<Point, 2> volume_centroid{Point::Zero(), Point::Zero()};
    std::array<std::array<double, 2>, 6> aperture{};  // [face][component], fractions summing to 1
    Point interface_centroid = Point::Zero();
    Point normal = Point::UnitX();              // unit, from a toward b
    double area = 0.0;                          // interface measure (area in 3D, length in 2D)
};

struct CellRecord {
    GridIndex index;
    CellClass cls = CellClass::Internal;
    Component component = Component::A;  // meaningful for non-partial cells
    bool on_box = false;                 // touches the domain box
    CutGeometry geometry;                // populated for partial cells
};

struct ClassifyOptions {
    bool perturb_zero_corners = true;  // exact zeros become +1e-12 h; otherwise DegenerateCut
    bool compute_geometry = true;
};

namespace detail {

inline double corner_phi(const LevelSetGeometry& geom, const Point& x, double h, bool perturb) {
    const double v = geom.phi(x);
    if (v == 0.0) {
        if (!perturb) throw DegenerateCut("level set vanishes exactly at a cell corner");
        return 1e-12 * h;
    }
    return v;
}

/// Corner values of a cell, corner bit a set when the corner is on the high side of axis a.
inline std::vector<double> cell_corner_phi(const GridSpec& grid, const GridIndex& cell, const LevelSetGeometry& geom,
                                           bool perturb) {
    const int dim = grid.dim();
    std::vector<double> out(std::size_t{1} << dim);
    for (std::size_t bits = 0; bits < out.size(); ++bits) {
        GridIndex v = cell;
        for (int a = 0; a < dim; ++a) v[a] += (bits >> a) & 1;
        out[bits] = corner_phi(geom, grid.vertex(v), grid.h(), perturb);
    }
    return out;
}

using Polygon = std::vector<Point>;

// Keeps the part of a convex polygon where side * (alpha + g . y) <= 0.
inline Polygon clip(const Polygon& poly, double alpha, const Point& g, double side) {
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        const double fp = side * (alpha + g.dot(p)), fq = side * (alpha + g.dot(q));
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
    }
    return out;
}

inline double polygon_area(const Polygon& poly, Point* centroid = nullptr) {
    double area = 0.0;
    Point c = Point::Zero();
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        const double a = 0.5 * (poly[i] - poly[0]).cross(poly[i + 1] - poly[0]).norm();
        area += a;
        c += a * (poly[0] + poly[i] + poly[i + 1]) / 3.0;
    }
    if (centroid != nullptr) *centroid = area > 0.0 ? Point(c / area) : (poly.empty() ? Point::Zero() : poly[0]);
    return area;
}

// Volume and centroid of a convex polytope given by its boundary polygons.
inline double polytope_volume(const std::vector<Polygon>& faces, Point* centroid) {
    Point ref = Point::Zero();
    std::size_t count = 0;
    for (const auto& f : faces)
        for (const auto& v : f) {
            ref += v;
            ++count;
        }
    if (count == 0) {
        *centroid = Point::Zero();
        return 0.0;
    }
    ref /= static_cast<double>(count);
    double vol = 0.0;
    Point c = Point::Zero();
    for (const auto& f : faces)
        for (std::size_t i = 1; i + 1 < f.size(); ++i) {
            const double v = std::abs((f[0] - ref).dot((f[i] - ref).cross(f[i + 1] - ref))) / 6.0;
            vol += v;
            c += v * (ref + f[0] + f[i] + f[i + 1]) / 4.0;
        }
    *centroid = vol > 0.0 ? Point(c / vol) : ref;
    return vol;
}

// Vertices of face f of the cube [-h/2, h/2]^3, in cyclic order.
inline Polygon cube_face(int f, double h) {
    const int axis = f / 2;
    const double s = (f % 2) ? 0.5 * h : -0.5 * h;
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    Polygon poly;
    const std::array<std::array<double, 2>, 4> uv{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
    for (const auto& [a, b] : uv) {
        Point p = Point::Zero();
        p[axis] = s;
        p[u] = 0.5 * h * a;
        p[v] = 0.5 * h * b;
        poly.push_back(p);
    }
    return poly;
}

inline CutGeometry cut_geometry_3d(double h, double alpha, const Point& g) {
    CutGeometry geo;
    std::array<std::vector<Polygon>, 2> faces;
    for (int f = 0; f < 6; ++f) {
        const Polygon square = cube_face(f, h);
        const Polygon a_part = clip(square, alpha, g, +1.0);
        const double frac = std::clamp(polygon_area(a_part) / (h * h), 0.0, 1.0);
        geo.aperture[static_cast<std::size_t>(f)] = {frac, 1.0 - frac};
        if (a_part.size() >= 3) faces[0].push_back(a_part);
        const Polygon b_part = clip(square, alpha, g, -1.0);
        if (b_part.size() >= 3) faces[1].push_back(b_part);
    }

    // interface polygon: plane crossings of the 12 cube edges, ordered by angle in the plane
    Polygon pts;
    for (int a = 0; a < 3; ++a) {
        const int u = (a + 1) % 3, v = (a + 2) % 3;
        for (int su = -1; su <= 1; su += 2)
            for (int sv = -1; sv <= 1; sv += 2) {
                Point p = Point::Zero(), q = Point::Zero();
                p[a] = -0.5 * h;
                q[a] = 0.5 * h;
                p[u] = q[u] = 0.5 * h * su;
                p[v] = q[v] = 0.5 * h * sv;
                const double fp = alpha + g.dot(p), fq = alpha + g.dot(q);
                if ((fp <= 0.0) == (fq <= 0.0)) continue;
                const Point x = p + (q - p) * (fp / (fp - fq));
                bool dup = false;
                for (const auto& y : pts) dup = dup || (x - y).norm() < 1e-14 * h;
                if (!dup) pts.push_back(x);
            }
    }
    if (pts.size() < 3) throw DegenerateCut("plane reconstruction does not cut the cell");
    const Point nrm = g.normalized();
    const Point e1 = (std::abs(nrm[0]) < 0.9 ? Point::UnitX() : Point::UnitY()).cross(nrm).normalized();
    const Point e2 = nrm.cross(e1);
    Point mean = Point::Zero();
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Point& x, const Point& y) {
        return std::atan2((x - mean).dot(e2), (x - mean).dot(e1)) < std::atan2((y - mean).dot(e2), (y - mean).dot(e1));
    });
    geo.area = polygon_area(pts, &geo.interface_centroid);
    faces[0].push_back(pts);
    faces[1].push_back(pts);
    for (int c = 0; c < 2; ++c)
        geo.volume[static_cast<std::size_t>(c)] = polytope_volume(faces[static_cast<std::size_t>(c)], &geo.volume_centroid[static_cast<std::size_t>(c)]);
    return geo;
}

inline CutGeometry cut_geometry_2d(double h, double alpha, const Point& g) {
    CutGeometry geo;
    const Polygon square{{-0.5 * h, -0.5 * h, 0}, {0.5 * h, -0.5 * h, 0}, {0.5 * h, 0.5 * h, 0}, {-0.5 * h, 0.5 * h, 0}};
    for (int c = 0; c < 2; ++c) {
        const Polygon part = clip(square, alpha, g, c == 0 ? 1.0 : -1.0);
        geo.volume[static_cast<std::size_t>(c)] = part.size() >= 3 ? polygon_area(part, &geo.volume_centroid[static_cast<std::size_t>(c)]) : 0.0;
    }
    // edges as degenerate segments: fraction of each edge where the line function is negative
    for (int f = 0; f < 4; ++f) {
        const int axis = f / 2;
        const int t = 1 - axis;
        Point p = Point::Zero(), q = Point::Zero();
        p[axis] = q[axis] = (f % 2) ? 0.5 * h : -0.5 * h;
        p[t] = -0.5 * h;
        q[t] = 0.5 * h;
        const double fp = alpha + g.dot(p), fq = alpha + g.dot(q);
        double frac;
        if (fp <= 0.0 && fq <= 0.0) frac = 1.0;
        else if (fp > 0.0 && fq > 0.0) frac = 0.0;
        else frac = fp <= 0.0 ? fp / (fp - fq) : fq / (fq - fp);
        geo.aperture[static_cast<std::size_t>(f)] = {frac, 1.0 - frac};
    }
    Polygon pts;
    for (std::size_t i = 0; i < 4; ++i) {
        const Point& p = square[i];
        const Point& q = square[(i + 1) % 4];
        const double fp = alpha + g.dot(p), fq = alpha + g.dot(q);
        if ((fp <= 0.0) == (fq <= 0.0)) continue;
        pts.push_back(p + (q - p) * (fp / (fp - fq)));
    }
    if (pts.size() != 2) throw DegenerateCut("line reconstruction does not cut the cell");
    geo.area = (pts[1] - pts[0]).norm();
    geo.interface_centroid = 0.5 * (pts[0] + pts[1]);
    return geo;
}

}  // namespace detail

/// Populates the cut geometry of a partial cell from the linear fit of its corner values.
inline CellRecord cut_geometry(CellRecord cell, const LevelSetGeometry& geom, const GridSpec& grid,
                               bool perturb_zero_corners = true) {
    if (cell.cls != CellClass::Partial) throw std::invalid_argument("cut_geometry: cell is not partial");
    const int dim = grid.dim();
    const double h = grid.h();
    const auto corners = detail::cell_corner_phi(grid, cell.index, geom, perturb_zero_corners);

    // least-squares plane alpha + g . y through the corners, y relative to the cell center
    double alpha = 0.0;
    Point g = Point::Zero();
    for (std::size_t bits = 0; bits < corners.size(); ++bits) {
        alpha += corners[bits];
        for (int a = 0; a < dim; ++a) g[a] += ((bits >> a) & 1 ? 1.0 : -1.0) * corners[bits];
    }
    alpha /= static_cast<double>(corners.size());
    g /= (dim == 3 ? 4.0 : 2.0) * h;
    if (g.norm() == 0.0) throw DegenerateCut("flat level set reconstruction in cell " + to_string(cell.index));

    bool neg = false, pos = false;
    for (std::size_t bits = 0; bits < corners.size(); ++bits) {
        double y = alpha;
        for (int a = 0; a < dim; ++a) y += g[a] * ((bits >> a) & 1 ? 0.5 : -0.5) * h;
        neg = neg || y < 0.0;
        pos = pos || y > 0.0;
    }
    if (!(neg && pos)) throw DegenerateCut("plane reconstruction misses cell " + to_string(cell.index));

    CutGeometry geo = dim == 3 ? detail::cut_geometry_3d(h, alpha, g) : detail::cut_geometry_2d(h, alpha, g);
    const Point center = grid.cell_center(cell.index);
    geo.interface_centroid += center;
    for (auto& c : geo.volume_centroid) c += center;
    Point n = geom.grad(geo.interface_centroid);
    for (int a = dim; a < 3; ++a) n[a] = 0.0;
    geo.normal = n.normalized();
    cell.geometry = geo;
    return cell;
}

/// Classifies every cell (linear order of the grid) and computes partial-cell geometry.
/// Partial cells whose plane reconstruction misses the cell fall back to the
/// majority corner sign (ties broken by the reconstruction's center value).
inline std::vector<CellRecord> classify(const GridSpec& grid, const LevelSetGeometry& geom, const ClassifyOptions& opt = {}) {
    const auto count = grid.cell_count();
    std::vector<CellRecord> out(static_cast<std::size_t>(count));
    for (std::int64_t id = 0; id < count; ++id) {
        CellRecord rec;
        rec.index = grid.unlinear(id);
        for (int a = 0; a < grid.dim(); ++a) rec.on_box = rec.on_box || rec.index[a] == 0 || rec.index[a] == grid.n(a) - 1;
        const auto corners = detail::cell_corner_phi(grid, rec.index, geom, opt.perturb_zero_corners);
        int negative = 0;
        double mean = 0.0;
        for (double v : corners) {
            negative += v < 0.0 ? 1 : 0;
            mean += v;
        }
        const int total = static_cast<int>(corners.size());
        auto settle = [&](Component c) {
            rec.cls = rec.on_box ? CellClass::Boundary : CellClass::Internal;
            rec.component = c;
        };
        if (negative == total) {
            settle(Component::A);
        } else if (negative == 0) {
            settle(Component::B);
        } else {
            rec.cls = CellClass::Partial;
            if (opt.compute_geometry) {
                try {
                    rec = cut_geometry(rec, geom, grid, opt.perturb_zero_corners);
                } catch (const DegenerateCut&) {
                    const bool a_major = 2 * negative > total || (2 * negative == total && mean < 0.0);
                    settle(a_major ? Component::A : Component::B);
                }
            }
        }
        out[static_cast<std::size_t>(id)] = rec;
    }
    return out;
}

}  // namespace cgstencil
