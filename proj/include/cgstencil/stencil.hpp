#pragma once

// Stencil selection for quadratic (2D, 3D) and cubic (2D) interpolation on a
// Cartesian lattice.
//
// 2D quadratic: the center, a consecutive pair of its first ring, and three
// points of one second-layer directional line (5 points).
// 3D quadratic: the center, a first-layer face center plus a consecutive pair
// of that face's ring, and a full 2D quadratic selection inside a second-layer
// directional plane (25 points).
// 2D cubic: a 2D quadratic selection plus four points of one third-layer
// directional line (7 points).
//
// Search order is deterministic: preferred direction first, then -x,+x,-y,+y,
// -z,+z; ring pairs in ring order; line subsets lexicographic. The first fully
// available candidate wins, so the result depends only on the availability of
// the candidates inspected before it.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cgstencil/errors.hpp"
#include "cgstencil/grid.hpp"

namespace cgstencil {

using AvailabilityMask = std::function<bool(const GridIndex&)>;

inline AvailabilityMask all_available() {
    return [](const GridIndex&) { return true; };
}

inline AvailabilityMask available_set(std::set<GridIndex> cells) {
    return [cells = std::move(cells)](const GridIndex& g) { return cells.count(g) != 0; };
}

/// Intersects a mask with the grid's index range.
inline AvailabilityMask within(const GridSpec& grid, AvailabilityMask mask) {
    return [grid, mask = std::move(mask)](const GridIndex& g) { return grid.contains(g) && mask(g); };
}

struct StencilChoices {
    Direction line_dir;            // direction of the second-layer line (within the 2D part)
    int pair = -1;                 // ring position of the first node of the consecutive pair
    std::vector<int> line_subset;  // positions along the 5-point line

    std::optional<Direction> face_dir;  // 3D only
    int face_pair = -1;
    std::optional<Direction> plane_dir;  // 3D only

    std::optional<Direction> cubic_dir;  // 2D cubic only
    std::vector<int> cubic_subset;       // positions along the 7-point line

    std::string describe() const {
        auto join = [](const std::vector<int>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "-" : "") + std::to_string(v[i]);
            return s;
        };
        std::string s;
        if (face_dir) s += "face=" + to_string(*face_dir) + ";face_pair=" + std::to_string(face_pair) + ";";
        if (plane_dir) s += "plane=" + to_string(*plane_dir) + ";";
        s += "line=" + to_string(line_dir) + ";pair=" + std::to_string(pair) + ";subset=" + join(line_subset);
        if (cubic_dir) s += ";cubic=" + to_string(*cubic_dir) + ";cubic_subset=" + join(cubic_subset);
        return s;
    }
};

struct StencilSelection {
    int degree = 2;
    int dim = 2;
    std::vector<GridIndex> nodes;
    StencilChoices choices;
    GridIndex local_origin;
};

/// Number of monomials of total degree <= degree in dim variables.
constexpr int monomial_count(int dim, int degree) {
    int num = 1, den = 1;
    for (int i = 1; i <= dim; ++i) {
        num *= degree + i;
        den *= i;
    }
    return num / den;
}

/// Lexicographic k-subsets of {0..n-1}.
inline std::vector<std::vector<int>> lexicographic_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
    if (k > n) return out;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

/// One candidate of the planar (2D) quadratic algorithm.
struct PlanarQuadratic {
    Direction line_dir;  // lattice direction
    int pair = -1;
    std::vector<int> subset;
    std::vector<GridIndex> nodes;  // center, pair, three line points
};

/// Visits every planar quadratic candidate in search order; stops when the visitor returns true.
/// `preferred` is a lattice direction; it is honored only if it lies in the plane.
template <typename Visitor>
void visit_planar_quadratics(const LatticePlane& plane, const Direction* preferred, Visitor&& visit) {
    const Direction* in_plane_pref = nullptr;
    Direction mapped;
    if (preferred != nullptr && (preferred->axis == plane.u_axis || preferred->axis == plane.v_axis)) {
        mapped = {preferred->axis == plane.u_axis ? 0 : 1, preferred->sign};
        in_plane_pref = &mapped;
    }
    const auto ring = plane_layer(plane, 1).members;
    const auto shell2 = plane_layer(plane, 2);
    static const auto subsets = lexicographic_subsets(5, 3);
    for (Direction d : direction_order(2, in_plane_pref)) {
        const Direction lattice_dir = plane.lift(d);
        const auto line = directional_subset(shell2, lattice_dir);
        for (int p = 0; p < 8; ++p) {
            for (const auto& sub : subsets) {
                PlanarQuadratic cand{lattice_dir, p, sub, {}};
                cand.nodes = {plane.center, ring[static_cast<std::size_t>(p)], ring[static_cast<std::size_t>((p + 1) % 8)]};
                for (int s : sub) cand.nodes.push_back(line[static_cast<std::size_t>(s)]);
                if (visit(cand)) return;
            }
        }
    }
}

namespace detail {

inline bool all_of_available(const std::vector<GridIndex>& nodes, const AvailabilityMask& mask) {
    for (const auto& n : nodes)
        if (!mask(n)) return false;
    return true;
}

inline std::optional<PlanarQuadratic> first_planar_quadratic(const LatticePlane& plane, const AvailabilityMask& mask,
                                                            const Direction* preferred) {
    if (!mask(plane.center)) return std::nullopt;
    // availability is cached per candidate node to keep repeated probes cheap
    const auto ring = plane_layer(plane, 1).members;
    std::vector<bool> ring_ok;
    for (const auto& r : ring) ring_ok.push_back(mask(r));
    std::optional<PlanarQuadratic> found;
    visit_planar_quadratics(plane, preferred, [&](const PlanarQuadratic& c) {
        if (!ring_ok[static_cast<std::size_t>(c.pair)] || !ring_ok[static_cast<std::size_t>((c.pair + 1) % 8)])
            return false;
        for (std::size_t i = 3; i < c.nodes.size(); ++i)
            if (!mask(c.nodes[i])) return false;
        found = c;
        return true;
    });
    return found;
}

}  // namespace detail

inline StencilSelection select_2d_quadratic(const GridIndex& center, const AvailabilityMask& mask,
                                            std::optional<Direction> preferred = std::nullopt) {
    if (center.dim != 2) throw std::invalid_argument("select_2d_quadratic: center must be 2D");
    if (!mask(center)) throw NoStencil("center " + to_string(center) + " is unavailable");
    auto pick = detail::first_planar_quadratic(LatticePlane::of_2d(center), mask, preferred ? &*preferred : nullptr);
    if (!pick) throw NoStencil("no available 2D quadratic stencil around " + to_string(center));
    StencilSelection sel;
    sel.degree = 2;
    sel.dim = 2;
    sel.nodes = pick->nodes;
    sel.choices.line_dir = pick->line_dir;
    sel.choices.pair = pick->pair;
    sel.choices.line_subset = pick->subset;
    sel.local_origin = center;
    return sel;
}

/// First-layer face triple: face center plus a consecutive pair of the face ring.
struct FaceTriple {
    Direction face_dir;
    int pair = -1;
    std::vector<GridIndex> nodes;
};

template <typename Visitor>
void visit_face_triples(const GridIndex& center, const Direction* preferred, Visitor&& visit) {
    for (Direction d : direction_order(3, preferred)) {
        const auto plane = LatticePlane::normal_to(shifted(center, d, 1), d.axis);
        const auto ring = plane_layer(plane, 1).members;
        for (int p = 0; p < 8; ++p) {
            FaceTriple t{d, p, {plane.center, ring[static_cast<std::size_t>(p)], ring[static_cast<std::size_t>((p + 1) % 8)]}};
            if (visit(t)) return;
        }
    }
}

/// Second-layer directional plane of a 3D center.
inline LatticePlane second_layer_plane(const GridIndex& center, Direction d) {
    return LatticePlane::normal_to(shifted(center, d, 2), d.axis);
}

inline StencilSelection select_3d_quadratic(const GridIndex& center, const AvailabilityMask& mask,
                                            std::optional<Direction> preferred_face = std::nullopt,
                                            std::optional<Direction> preferred_plane = std::nullopt) {
    if (center.dim != 3) throw std::invalid_argument("select_3d_quadratic: center must be 3D");
    if (!mask(center)) throw NoStencil("center " + to_string(center) + " is unavailable");

    // The face triple and the plane selection never share nodes, so the first
    // valid (face, plane) pair in nested search order is (first face, first plane).
    std::optional<FaceTriple> face;
    visit_face_triples(center, preferred_face ? &*preferred_face : nullptr, [&](const FaceTriple& t) {
        if (!detail::all_of_available(t.nodes, mask)) return false;
        face = t;
        return true;
    });
    if (!face) throw NoStencil("no available first-layer face triple around " + to_string(center));

    std::optional<PlanarQuadratic> planar;
    Direction plane_dir;
    for (Direction d : direction_order(3, preferred_plane ? &*preferred_plane : nullptr)) {
        planar = detail::first_planar_quadratic(second_layer_plane(center, d), mask, nullptr);
        if (planar) {
            plane_dir = d;
            break;
        }
    }
    if (!planar) throw NoStencil("no available second-layer plane selection around " + to_string(center));

    StencilSelection sel;
    sel.degree = 2;
    sel.dim = 3;
    sel.nodes.push_back(center);
    sel.nodes.insert(sel.nodes.end(), face->nodes.begin(), face->nodes.end());
    sel.nodes.insert(sel.nodes.end(), planar->nodes.begin(), planar->nodes.end());
    sel.choices.face_dir = face->face_dir;
    sel.choices.face_pair = face->pair;
    sel.choices.plane_dir = plane_dir;
    sel.choices.line_dir = planar->line_dir;
    sel.choices.pair = planar->pair;
    sel.choices.line_subset = planar->subset;
    sel.local_origin = center;
    return sel;
}

inline StencilSelection select_2d_cubic(const GridIndex& center, const AvailabilityMask& mask,
                                        std::optional<Direction> preferred = std::nullopt) {
    StencilSelection sel = select_2d_quadratic(center, mask, preferred);
    static const auto subsets = lexicographic_subsets(7, 4);
    const auto shell3 = layer_members(center, 3, 2);
    for (Direction d : direction_order(2, preferred ? &*preferred : nullptr)) {
        const auto line = directional_subset(shell3, d);
        for (const auto& sub : subsets) {
            bool ok = true;
            for (int s : sub) ok = ok && mask(line[static_cast<std::size_t>(s)]);
            if (!ok) continue;
            sel.degree = 3;
            for (int s : sub) sel.nodes.push_back(line[static_cast<std::size_t>(s)]);
            sel.choices.cubic_dir = d;
            sel.choices.cubic_subset = sub;
            return sel;
        }
    }
    throw NoStencil("no available third-layer line subset around " + to_string(center));
}

}  // namespace cgstencil
