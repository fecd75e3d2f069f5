#pragma once

// Uniform Cartesian lattice geometry and the neighbor-layer topology used by
// the stencil selection algorithms.
//
// Layers are Chebyshev shells around a center index: layer L holds every
// index m with max_a |m[a] - c[a]| == L. 2D shells are emitted as a
// counter-clockwise ring starting at (c.x + L, c.y), so "consecutive" means
// adjacent in that ring (wrapping around). 3D shells are emitted
// faces-then-edges-then-corners; consecutive runs in 3D are only defined
// inside 2D planes of the lattice (see plane_layer).

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cgstencil {

using Point = Eigen::Vector3d;

struct GridIndex {
    std::array<int, 3> c{0, 0, 0};
    int dim = 2;

    constexpr GridIndex() = default;
    constexpr GridIndex(int i, int j) : c{i, j, 0}, dim(2) {}
    constexpr GridIndex(int i, int j, int k) : c{i, j, k}, dim(3) {}

    constexpr int operator[](int a) const { return c[a]; }
    constexpr int& operator[](int a) { return c[a]; }

    friend constexpr bool operator==(const GridIndex&, const GridIndex&) = default;
    friend constexpr auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

inline std::string to_string(const GridIndex& g) {
    std::string s = "(" + std::to_string(g[0]) + "," + std::to_string(g[1]);
    if (g.dim == 3) s += "," + std::to_string(g[2]);
    return s + ")";
}

struct Direction {
    int axis = 0;
    int sign = 1;

    friend constexpr bool operator==(const Direction&, const Direction&) = default;

    constexpr Direction opposite() const { return {axis, -sign}; }
};

inline constexpr Direction kWest{0, -1};
inline constexpr Direction kEast{0, +1};
inline constexpr Direction kSouth{1, -1};
inline constexpr Direction kNorth{1, +1};
inline constexpr Direction kDown{2, -1};
inline constexpr Direction kUp{2, +1};

/// Canonical direction order: -x, +x, -y, +y, -z, +z.
inline std::vector<Direction> canonical_directions(int dim) {
    std::vector<Direction> out;
    for (int a = 0; a < dim; ++a) {
        out.push_back({a, -1});
        out.push_back({a, +1});
    }
    return out;
}

/// Canonical order with `preferred` (if any) moved to the front.
inline std::vector<Direction> direction_order(int dim, const Direction* preferred) {
    auto dirs = canonical_directions(dim);
    if (preferred != nullptr) {
        auto it = std::find(dirs.begin(), dirs.end(), *preferred);
        if (it != dirs.end()) std::rotate(dirs.begin(), it, it + 1);
    }
    return dirs;
}

inline std::string to_string(Direction d) {
    static constexpr std::array<std::string_view, 6> names{"west", "east", "south", "north", "down", "up"};
    return std::string(names[static_cast<std::size_t>(2 * d.axis + (d.sign > 0 ? 1 : 0))]);
}

inline Direction parse_direction(std::string_view s) {
    if (s == "west" || s == "-x") return kWest;
    if (s == "east" || s == "+x") return kEast;
    if (s == "south" || s == "-y") return kSouth;
    if (s == "north" || s == "+y") return kNorth;
    if (s == "down" || s == "-z") return kDown;
    if (s == "up" || s == "+z") return kUp;
    throw std::invalid_argument("unknown direction '" + std::string(s) + "'");
}

inline GridIndex shifted(GridIndex g, Direction d, int steps = 1) {
    g[d.axis] += d.sign * steps;
    return g;
}

/// Uniform isotropic Cartesian lattice of cells.
class GridSpec {
public:
    GridSpec(int dim, std::array<int, 3> n, Point lo, Point hi) : dim_(dim), n_(n), lo_(lo), hi_(hi) {
        if (dim != 2 && dim != 3) throw std::invalid_argument("GridSpec: dim must be 2 or 3");
        for (int a = 0; a < dim; ++a) {
            if (n[a] <= 0) throw std::invalid_argument("GridSpec: cell counts must be positive");
            if (!(hi[a] > lo[a])) throw std::invalid_argument("GridSpec: hi must exceed lo on every axis");
            h_[a] = (hi[a] - lo[a]) / n[a];
        }
        for (int a = dim; a < 3; ++a) {
            n_[a] = 1;
            lo_[a] = 0.0;
            hi_[a] = 0.0;
            h_[a] = 0.0;
        }
        for (int a = 1; a < dim; ++a) {
            if (std::abs(h_[a] - h_[0]) > 1e-12 * h_[0])
                throw std::invalid_argument("GridSpec: anisotropic spacing is not supported");
        }
    }

    /// n cells per axis over the box [lo, hi]^dim.
    static GridSpec cube(int dim, int n, double lo, double hi) {
        return GridSpec(dim, {n, n, n}, Point::Constant(lo), Point::Constant(hi));
    }

    int dim() const { return dim_; }
    int n(int axis) const { return n_[axis]; }
    double h() const { return h_[0]; }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }

    std::int64_t cell_count() const {
        std::int64_t c = 1;
        for (int a = 0; a < dim_; ++a) c *= n_[a];
        return c;
    }

    bool contains(const GridIndex& g) const {
        for (int a = 0; a < dim_; ++a)
            if (g[a] < 0 || g[a] >= n_[a]) return false;
        return true;
    }

    Point cell_center(const GridIndex& g) const {
        Point p = Point::Zero();
        for (int a = 0; a < dim_; ++a) p[a] = lo_[a] + (g[a] + 0.5) * h_[a];
        return p;
    }

    /// Physical position of lattice vertex (i, j[, k]) (cell corners).
    Point vertex(const GridIndex& g) const {
        Point p = Point::Zero();
        for (int a = 0; a < dim_; ++a) p[a] = lo_[a] + g[a] * h_[a];
        return p;
    }

    std::int64_t linear(const GridIndex& g) const {
        std::int64_t id = 0;
        for (int a = dim_ - 1; a >= 0; --a) id = id * n_[a] + g[a];
        return id;
    }

    GridIndex unlinear(std::int64_t id) const {
        GridIndex g = dim_ == 2 ? GridIndex(0, 0) : GridIndex(0, 0, 0);
        for (int a = 0; a < dim_; ++a) {
            g[a] = static_cast<int>(id % n_[a]);
            id /= n_[a];
        }
        return g;
    }

private:
    int dim_;
    std::array<int, 3> n_;
    Point lo_;
    Point hi_;
    std::array<double, 3> h_{};
};

struct LayerSet {
    GridIndex center;
    int layer = 0;
    std::vector<GridIndex> members;
    bool ring_ordered = false;  // true for 2D shells and in-plane shells
};

namespace detail {

// Counter-clockwise ring of Chebyshev radius L in (u, v) offsets, starting at (L, 0).
inline std::vector<std::array<int, 2>> ring_offsets(int L) {
    if (L == 0) return {{0, 0}};
    std::vector<std::array<int, 2>> out;
    out.reserve(static_cast<std::size_t>(8 * L));
    int u = L, v = 0;
    out.push_back({u, v});
    auto walk = [&](int du, int dv, int steps) {
        for (int s = 0; s < steps; ++s) {
            u += du;
            v += dv;
            out.push_back({u, v});
        }
    };
    walk(0, +1, L);
    walk(-1, 0, 2 * L);
    walk(0, -1, 2 * L);
    walk(+1, 0, 2 * L);
    walk(0, +1, L - 1);
    return out;
}

}  // namespace detail

/// A 2D plane of the lattice: the 2D lattice itself, or a 3D slice normal to one axis.
struct LatticePlane {
    GridIndex center;
    int u_axis = 0;
    int v_axis = 1;

    static LatticePlane of_2d(const GridIndex& center) { return {center, 0, 1}; }

    /// Plane through `center` normal to `normal_axis`; in-plane axes ascend.
    static LatticePlane normal_to(const GridIndex& center, int normal_axis) {
        LatticePlane p{center, 0, 1};
        int slot = 0;
        std::array<int, 2> axes{};
        for (int a = 0; a < 3; ++a)
            if (a != normal_axis) axes[slot++] = a;
        p.u_axis = axes[0];
        p.v_axis = axes[1];
        return p;
    }

    GridIndex at(int du, int dv) const {
        GridIndex g = center;
        g[u_axis] += du;
        g[v_axis] += dv;
        return g;
    }

    /// In-plane direction (axis 0 = u, 1 = v) as a lattice direction.
    Direction lift(Direction in_plane) const { return {in_plane.axis == 0 ? u_axis : v_axis, in_plane.sign}; }
};

/// Chebyshev shell of radius `layer` within a lattice plane, ring ordered.
inline LayerSet plane_layer(const LatticePlane& plane, int layer) {
    LayerSet ls{plane.center, layer, {}, true};
    for (auto [du, dv] : detail::ring_offsets(layer)) ls.members.push_back(plane.at(du, dv));
    return ls;
}

inline LayerSet layer_members(const GridIndex& center, int layer, int dim) {
    if (layer < 0) throw std::invalid_argument("layer_members: negative layer");
    if (dim != 2 && dim != 3) throw std::invalid_argument("layer_members: dim must be 2 or 3");
    GridIndex c = center;
    c.dim = dim;
    if (dim == 2) return plane_layer(LatticePlane::of_2d(c), layer);

    LayerSet ls{c, layer, {}, false};
    if (layer == 0) {
        ls.members.push_back(c);
        return ls;
    }
    // faces (one saturated axis), then edges (two), then corners (three)
    for (int saturated = 1; saturated <= 3; ++saturated) {
        for (int dx = -layer; dx <= layer; ++dx)
            for (int dy = -layer; dy <= layer; ++dy)
                for (int dz = -layer; dz <= layer; ++dz) {
                    int s = (std::abs(dx) == layer) + (std::abs(dy) == layer) + (std::abs(dz) == layer);
                    if (s == saturated) ls.members.emplace_back(c[0] + dx, c[1] + dy, c[2] + dz);
                }
    }
    return ls;
}

/// Members on the side of the shell facing `d`, lexicographic in the remaining axes.
inline std::vector<GridIndex> directional_subset(const LayerSet& ls, Direction d) {
    if (ls.layer < 1) throw std::invalid_argument("directional_subset: layer must be >= 1");
    std::vector<GridIndex> out;
    for (const auto& m : ls.members)
        if (m[d.axis] - ls.center[d.axis] == d.sign * ls.layer) out.push_back(m);
    const int dim = ls.center.dim;
    std::sort(out.begin(), out.end(), [&](const GridIndex& x, const GridIndex& y) {
        for (int a = 0; a < dim; ++a) {
            if (a == d.axis) continue;
            if (x[a] != y[a]) return x[a] < y[a];
        }
        return false;
    });
    return out;
}

/// All wrap-around windows of k adjacent ring members.
inline std::vector<std::vector<GridIndex>> consecutive_runs(const LayerSet& ls, int k) {
    if (k < 2) throw std::invalid_argument("consecutive_runs: k must be >= 2");
    if (ls.layer < 1) throw std::invalid_argument("consecutive_runs: layer must be >= 1");
    if (!ls.ring_ordered)
        throw std::invalid_argument("consecutive_runs: 3D shells have no ring order; use plane_layer");
    const auto n = ls.members.size();
    std::vector<std::vector<GridIndex>> runs;
    if (static_cast<std::size_t>(k) > n) return runs;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<GridIndex> w;
        for (int t = 0; t < k; ++t) w.push_back(ls.members[(s + static_cast<std::size_t>(t)) % n]);
        runs.push_back(std::move(w));
    }
    return runs;
}

inline int chebyshev_distance(const GridIndex& a, const GridIndex& b) {
    int d = 0;
    for (int x = 0; x < std::max(a.dim, b.dim); ++x) d = std::max(d, std::abs(a[x] - b[x]));
    return d;
}

}  // namespace cgstencil
