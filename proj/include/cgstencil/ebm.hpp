#pragma once

// Embedded-boundary discretization of the elliptic interface problem
//
//     div( grad(p) / rho ) = f,   [p] = J1,   [ (1/rho) dp/dn ] = J2,
//
// with jumps taken as (component a) - (component b) and n pointing from a to b.
//
// Unknowns: one cell-center value per full cell; four per partial cell (a and b
// at the cell center, a and b at the interface centroid). Rows:
//   full cell       7-point (5-point in 2D) finite-volume balance with
//                   two-point face fluxes and Dirichlet ghost elimination;
//   partial cell    per component, an aperture-weighted finite-volume balance
//                   over the component's part of the cell, with the interface
//                   flux taken from a quadratic interpolant on a selected
//                   stencil; plus one [p] row and one [flux] row.
// The interface flux interpolant uses the stencil selected around the partial
// cell among cells where the component holds at least half the cell volume,
// with the selection's zeroth node moved from the cell center to the interface
// centroid, which carries the interface unknown. Where no selection exists, the
// nearest unisolvent nodes are used instead (quadratic, then linear).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cgstencil/errors.hpp"
#include "cgstencil/geometry.hpp"
#include "cgstencil/grid.hpp"
#include "cgstencil/interp.hpp"
#include "cgstencil/linsolve.hpp"
#include "cgstencil/stencil.hpp"

namespace cgstencil {

enum class Location { Center, Interface };

/// Bijection (cell, component, location) <-> contiguous unknown index.
class UnknownMap {
public:
    struct Key {
        std::int64_t cell;
        Component comp;
        Location loc;
    };

    explicit UnknownMap(const std::vector<CellRecord>& records) : ids_(records.size(), {-1, -1, -1, -1}) {
        for (std::size_t cell = 0; cell < records.size(); ++cell) {
            const auto& r = records[cell];
            auto push = [&](Component c, Location l) {
                ids_[cell][slot(c, l)] = static_cast<int>(keys_.size());
                keys_.push_back({static_cast<std::int64_t>(cell), c, l});
            };
            if (r.cls == CellClass::Partial) {
                push(Component::A, Location::Center);
                push(Component::B, Location::Center);
                push(Component::A, Location::Interface);
                push(Component::B, Location::Interface);
            } else {
                push(r.component, Location::Center);
            }
        }
    }

    int center(std::int64_t cell, Component c) const { return ids_[static_cast<std::size_t>(cell)][slot(c, Location::Center)]; }
    int iface(std::int64_t cell, Component c) const { return ids_[static_cast<std::size_t>(cell)][slot(c, Location::Interface)]; }
    int size() const { return static_cast<int>(keys_.size()); }
    const Key& key(int u) const { return keys_[static_cast<std::size_t>(u)]; }

private:
    static std::size_t slot(Component c, Location l) { return static_cast<std::size_t>(idx(c) + (l == Location::Interface ? 2 : 0)); }

    std::vector<std::array<int, 4>> ids_;
    std::vector<Key> keys_;
};

struct ProblemSpec {
    std::array<double, 2> rho{1.0, 1.0};
    std::function<double(const Point&, Component)> source;
    std::function<double(const Point&)> jump_value;                     // J1
    std::function<double(const Point&, const Point& normal)> jump_flux;  // J2, normal from a to b
    std::function<double(const Point&, Component)> boundary;            // Dirichlet data on the box
};

struct EbmProblem {
    std::string name;
    GridSpec grid;
    LevelSetGeometry geom;
    ProblemSpec spec;
    std::function<double(const Point&, Component)> exact;
};

/// Sphere of radius 1 centered in [0,3]^dim; exact solution r^3 inside and
/// 0.001 r^3 + (1 - 1/10)/8 outside, r measured from the coordinate origin.
/// Source and jump data are derived analytically for the given rho values.
inline EbmProblem manufactured_case(int n, double rho_a = 1.0, double rho_b = 0.001, int dim = 3) {
    if (n < 4) throw std::invalid_argument("manufactured_case: need at least 4 cells per axis");
    if (!(rho_a > 0.0 && rho_b > 0.0)) throw std::invalid_argument("manufactured_case: rho must be positive");
    constexpr double kOuterScale = 0.001;
    constexpr double kOuterShift = (1.0 - 1.0 / 10.0) * (1.0 / 8.0);
    const double d = dim;
    EbmProblem pb{"manufactured-sphere", GridSpec::cube(dim, n, 0.0, 3.0),
                  LevelSetGeometry::sphere(dim == 3 ? Point(1.5, 1.5, 1.5) : Point(1.5, 1.5, 0.0), 1.0), {}, {}};
    pb.spec.rho = {rho_a, rho_b};
    pb.exact = [=](const Point& x, Component c) {
        const double r3 = std::pow(x.squaredNorm(), 1.5);
        return c == Component::A ? r3 : kOuterScale * r3 + kOuterShift;
    };
    // div(grad r^3) = 3 (dim + 1) r
    pb.spec.source = [=](const Point& x, Component c) {
        const double lap = 3.0 * (d + 1.0) * x.norm();
        return c == Component::A ? lap / rho_a : kOuterScale * lap / rho_b;
    };
    pb.spec.jump_value = [exact = pb.exact](const Point& x) { return exact(x, Component::A) - exact(x, Component::B); };
    // grad r^3 = 3 r x
    pb.spec.jump_flux = [=](const Point& x, const Point& nrm) {
        const double dn = 3.0 * x.norm() * x.dot(nrm);
        return dn / rho_a - kOuterScale * dn / rho_b;
    };
    pb.spec.boundary = pb.exact;
    return pb;
}

/// No interface (phi = -1), rho = 1, exact solution prod_a sin(x_a) on [0,3]^dim.
inline EbmProblem smooth_poisson_case(int n, int dim = 3) {
    EbmProblem pb{"smooth-poisson", GridSpec::cube(dim, n, 0.0, 3.0), LevelSetGeometry::constant(-1.0), {}, {}};
    pb.exact = [dim](const Point& x, Component) {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= std::sin(x[a]);
        return v;
    };
    pb.spec.source = [dim, exact = pb.exact](const Point& x, Component c) { return -dim * exact(x, c); };
    pb.spec.jump_value = [](const Point&) { return 0.0; };
    pb.spec.jump_flux = [](const Point&, const Point&) { return 0.0; };
    pb.spec.boundary = pb.exact;
    return pb;
}

struct EbmOptions {
    double small_cell_fraction = 1e-3;  // V_c / h^dim below this slaves the center unknown
    double max_condition = 1e6;         // interface-node replacement guard
    bool occupied_nodes_only = true;
    int threads = 1;  // workers for flux-stencil construction
};

/// Interpolant of one component around one partial cell, node 0 at the interface centroid.
struct FluxStencil {
    Component comp = Component::A;
    std::vector<int> unknowns;
    std::optional<StencilFunctional> functional;
    std::optional<StencilSelection> selection;  // absent when degraded
    Eigen::VectorXd flux;                       // (1/rho) n . grad at the interface centroid
    bool degraded = false;
};

struct AssemblyStats {
    int partial_cells = 0;
    int degraded_stencils = 0;
    int direction_retries = 0;
    int slaved_centers = 0;
    int model_flux_faces = 0;  // cut faces whose neighbor lacks the component; flux taken from the interpolant
    int max_flux_nonzeros = 0;
    int max_partial_row_nonzeros = 0;
};

namespace detail {

// Cells whose center value of component c is usable as an interpolation node:
// `self`, plus cells where c holds at least half of the cell volume.
inline AvailabilityMask component_mask(const GridSpec& grid, const std::vector<CellRecord>& records, Component c,
                                       const GridIndex& self, bool occupied_only) {
    return [&grid, &records, c, self, occupied_only](const GridIndex& g) {
        if (!grid.contains(g)) return false;
        if (g == self) return true;
        const auto& r = records[static_cast<std::size_t>(grid.linear(g))];
        if (r.cls != CellClass::Partial) return r.component == c;
        if (!occupied_only) return true;
        const auto ci = static_cast<std::size_t>(idx(c));
        return r.geometry.volume[ci] >= r.geometry.volume[1 - ci];
    };
}

// Axis directions sorted by alignment with `target`, best first (canonical order breaks ties).
inline std::vector<Direction> directions_by_alignment(int dim, const Point& target) {
    auto dirs = canonical_directions(dim);
    std::stable_sort(dirs.begin(), dirs.end(),
                     [&](Direction x, Direction y) { return x.sign * target[x.axis] > y.sign * target[y.axis]; });
    return dirs;
}

// Fallback interpolant: interface centroid plus the available cell centers
// nearest to it, greedily keeping the collocation matrix of full column rank.
inline std::optional<FluxStencil> nearest_node_stencil(const GridSpec& grid, const UnknownMap& map, const CellRecord& cell,
                                                       Component c, int iface_unknown, const AvailabilityMask& mask,
                                                       int degree, double max_condition) {
    const int dim = grid.dim();
    const Point xg = cell.geometry.interface_centroid;
    const MonomialBasis basis(dim, degree);
    const LocalFrame frame{grid.cell_center(cell.index), grid.h()};
    std::vector<std::pair<double, GridIndex>> cands;
    for (int L = 1; L <= 3; ++L)
        for (const auto& m : layer_members(cell.index, L, dim).members)
            if (m != cell.index && mask(m)) cands.emplace_back((grid.cell_center(m) - xg).norm(), m);
    std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) { return x.first != y.first ? x.first < y.first : x.second < y.second; });

    std::vector<Point> nodes{xg};
    std::vector<int> unknowns{iface_unknown};
    Eigen::MatrixXd rows = basis.values(frame.to_local(xg)).transpose();
    for (const auto& [dist, g] : cands) {
        if (static_cast<int>(nodes.size()) == basis.size()) break;
        const Point p = grid.cell_center(g);
        Eigen::MatrixXd trial(rows.rows() + 1, basis.size());
        trial.topRows(rows.rows()) = rows;
        trial.row(rows.rows()) = basis.values(frame.to_local(p)).transpose();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(trial);
        const auto& sv = svd.singularValues();
        if (!(sv[sv.size() - 1] > sv[0] / max_condition)) continue;
        rows = trial;
        nodes.push_back(p);
        unknowns.push_back(map.center(grid.linear(g), c));
    }
    if (static_cast<int>(nodes.size()) != basis.size()) return std::nullopt;
    FluxStencil fs;
    fs.comp = c;
    fs.unknowns = std::move(unknowns);
    try {
        fs.functional.emplace(std::move(nodes), basis, frame);
    } catch (const SingularSystem&) {
        return std::nullopt;
    }
    if (!(fs.functional->condition() <= max_condition)) return std::nullopt;
    fs.degraded = true;
    return fs;
}

}  // namespace detail

/// Builds the interface flux interpolant of component `c` around partial cell `cell_id`.
inline FluxStencil build_flux_stencil(const GridSpec& grid, const std::vector<CellRecord>& records, const UnknownMap& map,
                                      std::int64_t cell_id, Component c, double rho, const EbmOptions& opt = {},
                                      AssemblyStats* stats = nullptr) {
    const CellRecord& cell = records[static_cast<std::size_t>(cell_id)];
    if (cell.cls != CellClass::Partial) throw std::invalid_argument("build_flux_stencil: cell is not partial");
    const int dim = grid.dim();
    const auto& geo = cell.geometry;
    const auto mask = detail::component_mask(grid, records, c, cell.index, opt.occupied_nodes_only);
    const int iface_unknown = map.iface(cell_id, c);
    const Point into = c == Component::A ? Point(-geo.normal) : Point(geo.normal);

    FluxStencil fs;
    fs.comp = c;
    std::vector<std::vector<GridIndex>> tried;
    bool first = true;
    for (Direction d : detail::directions_by_alignment(dim, into)) {
        StencilSelection sel;
        try {
            sel = dim == 3 ? select_3d_quadratic(cell.index, mask, d, d) : select_2d_quadratic(cell.index, mask, d);
        } catch (const NoStencil&) {
            break;  // the search covers every direction, so other preferences cannot succeed either
        }
        if (std::find(tried.begin(), tried.end(), sel.nodes) != tried.end()) continue;
        tried.push_back(sel.nodes);
        if (!first && stats) ++stats->direction_retries;
        first = false;

        std::vector<Point> nodes = node_points(sel, grid);
        nodes[0] = geo.interface_centroid;
        try {
            StencilFunctional f(nodes, MonomialBasis(dim, 2), LocalFrame{grid.cell_center(cell.index), grid.h()});
            if (!(f.condition() <= opt.max_condition)) continue;
            fs.functional.emplace(std::move(f));
        } catch (const SingularSystem&) {
            continue;
        }
        fs.selection = sel;
        fs.unknowns.push_back(iface_unknown);
        for (std::size_t i = 1; i < sel.nodes.size(); ++i) fs.unknowns.push_back(map.center(grid.linear(sel.nodes[i]), c));
        break;
    }
    if (!fs.functional) {
        auto fb = detail::nearest_node_stencil(grid, map, cell, c, iface_unknown, mask, 2, opt.max_condition);
        if (!fb) fb = detail::nearest_node_stencil(grid, map, cell, c, iface_unknown, mask, 1, opt.max_condition);
        if (!fb) throw NoStencil("no interface interpolant for component " + std::to_string(idx(c)) + " at " + to_string(cell.index));
        fs = std::move(*fb);
        if (stats) ++stats->degraded_stencils;
    }
    fs.flux = fs.functional->normal_flux_weights(geo.interface_centroid, geo.normal, rho);
    if (stats) stats->max_flux_nonzeros = std::max(stats->max_flux_nonzeros, static_cast<int>((fs.flux.array() != 0.0).count()));
    return fs;
}

/// Interface normal flux (1/rho) dp/dn of component `c` at a partial cell as weights over unknowns.
inline std::vector<std::pair<int, double>> build_flux_row(const GridSpec& grid, const std::vector<CellRecord>& records,
                                                          const UnknownMap& map, std::int64_t cell_id, Component c,
                                                          double rho, const EbmOptions& opt = {}) {
    const auto fs = build_flux_stencil(grid, records, map, cell_id, c, rho, opt);
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < fs.unknowns.size(); ++i) row.emplace_back(fs.unknowns[i], fs.flux[static_cast<Eigen::Index>(i)]);
    return row;
}

struct Discretization {
    std::vector<CellRecord> records;
    UnknownMap map;
    std::unordered_map<std::int64_t, std::array<FluxStencil, 2>> stencils;  // by partial cell id
    SparseSystem system;
    AssemblyStats stats;
};

namespace detail {

// One matrix row, accumulated locally and flushed into the builder.
class RowWriter {
public:
    explicit RowWriter(int row) : row_(row) {}
    void add(int col, double v) { entries_.emplace_back(col, v); }
    template <typename Weights>
    void add_weights(const std::vector<int>& cols, const Weights& w, double scale) {
        for (std::size_t i = 0; i < cols.size(); ++i) add(cols[i], scale * w[static_cast<Eigen::Index>(i)]);
    }
    double diagonal() const {
        double d = 0.0;
        for (const auto& [c, v] : entries_)
            if (c == row_) d += v;
        return d;
    }
    int nonzeros() const {
        std::vector<int> cols;
        for (const auto& [c, v] : entries_) cols.push_back(c);
        std::sort(cols.begin(), cols.end());
        return static_cast<int>(std::unique(cols.begin(), cols.end()) - cols.begin());
    }
    void flush(TripletBuilder& tb) const {
        for (const auto& [c, v] : entries_) tb.add(row_, c, v);
    }

private:
    int row_;
    std::vector<std::pair<int, double>> entries_;
};

inline Point face_center(const GridSpec& grid, const GridIndex& g, int axis, int sign) {
    Point p = grid.cell_center(g);
    p[axis] += 0.5 * sign * grid.h();
    return p;
}

}  // namespace detail

/// Assembles the sparse system; fills `stencils` and `stats` when given.
inline SparseSystem assemble(const GridSpec& grid, const std::vector<CellRecord>& records, const ProblemSpec& spec,
                             const UnknownMap& map, const EbmOptions& opt = {},
                             std::unordered_map<std::int64_t, std::array<FluxStencil, 2>>* stencils_out = nullptr,
                             AssemblyStats* stats_out = nullptr) {
    const int dim = grid.dim();
    const double h = grid.h();
    const double face_area = dim == 3 ? h * h : h;
    const double cell_volume = dim == 3 ? h * h * h : h * h;
    AssemblyStats stats;
    TripletBuilder tb(map.size());
    std::vector<double> rhs(static_cast<std::size_t>(map.size()), 0.0);

    std::vector<std::int64_t> partial;
    for (std::size_t id = 0; id < records.size(); ++id)
        if (records[id].cls == CellClass::Partial) partial.push_back(static_cast<std::int64_t>(id));
    stats.partial_cells = static_cast<int>(partial.size());

    // flux stencils are independent per cell; workers take contiguous slices
    std::vector<std::optional<std::array<FluxStencil, 2>>> built(partial.size());
    const int workers = std::max(1, std::min<int>(opt.threads, static_cast<int>(partial.size())));
    std::vector<AssemblyStats> worker_stats(static_cast<std::size_t>(workers));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
        try {
            const std::size_t lo = partial.size() * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
            const std::size_t hi = partial.size() * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
            auto& ws = worker_stats[static_cast<std::size_t>(w)];
            for (std::size_t i = lo; i < hi; ++i)
                built[i].emplace(std::array<FluxStencil, 2>{
                    build_flux_stencil(grid, records, map, partial[i], Component::A, spec.rho[0], opt, &ws),
                    build_flux_stencil(grid, records, map, partial[i], Component::B, spec.rho[1], opt, &ws)});
        } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const auto& ws : worker_stats) {
        stats.degraded_stencils += ws.degraded_stencils;
        stats.direction_retries += ws.direction_retries;
        stats.max_flux_nonzeros = std::max(stats.max_flux_nonzeros, ws.max_flux_nonzeros);
    }
    std::unordered_map<std::int64_t, std::array<FluxStencil, 2>> stencils;
    for (std::size_t i = 0; i < partial.size(); ++i) stencils.emplace(partial[i], std::move(*built[i]));

    // two-point fluxes of component c across every face of cell g, scaled by the face apertures
    auto face_fluxes = [&](detail::RowWriter& row, int row_id, const GridIndex& g, Component c,
                           const std::array<std::array<double, 2>, 6>* apertures, const FluxStencil* model) {
        const double inv_rho = 1.0 / spec.rho[static_cast<std::size_t>(idx(c))];
        for (int a = 0; a < dim; ++a)
            for (int s = -1; s <= 1; s += 2) {
                const double ap = apertures ? (*apertures)[static_cast<std::size_t>(face_id(a, s))][static_cast<std::size_t>(idx(c))] : 1.0;
                if (ap <= 0.0) continue;
                const GridIndex nb = shifted(g, {a, s});
                if (!grid.contains(nb)) {
                    const double k = ap * inv_rho * face_area / (0.5 * h);
                    row.add(row_id, -k);
                    rhs[static_cast<std::size_t>(row_id)] -= k * spec.boundary(detail::face_center(grid, g, a, s), c);
                    continue;
                }
                const int nid = map.center(grid.linear(nb), c);
                if (nid >= 0) {
                    const double k = ap * inv_rho * face_area / h;
                    row.add(nid, k);
                    row.add(row_id, -k);
                } else if (model != nullptr) {
                    Point e = Point::Zero();
                    e[a] = s;
                    const auto w = model->functional->normal_flux_weights(detail::face_center(grid, g, a, s), e,
                                                                          spec.rho[static_cast<std::size_t>(idx(c))]);
                    row.add_weights(model->unknowns, w, ap * face_area);
                    ++stats.model_flux_faces;
                }
                // a full cell next to a cell lacking its component only arises from a
                // reclassified degenerate cut; that face is treated as insulated
            }
    };

    for (std::size_t id = 0; id < records.size(); ++id) {
        const auto& rec = records[id];
        const auto cell = static_cast<std::int64_t>(id);
        const Point xc = grid.cell_center(rec.index);
        if (rec.cls != CellClass::Partial) {
            const int u = map.center(cell, rec.component);
            detail::RowWriter row(u);
            face_fluxes(row, u, rec.index, rec.component, nullptr, nullptr);
            row.flush(tb);
            rhs[static_cast<std::size_t>(u)] += spec.source(xc, rec.component) * cell_volume;
            continue;
        }

        const auto& geo = rec.geometry;
        const auto& st = stencils.at(cell);
        for (Component c : {Component::A, Component::B}) {
            const auto ci = static_cast<std::size_t>(idx(c));
            const FluxStencil& fs = st[ci];
            const int u = map.center(cell, c);
            auto slave = [&] {
                detail::RowWriter row(u);
                row.add(u, 1.0);
                row.add_weights(fs.unknowns, fs.functional->value_weights(xc), -1.0);
                row.flush(tb);
                rhs[static_cast<std::size_t>(u)] = 0.0;
                ++stats.slaved_centers;
            };
            if (geo.volume[ci] < opt.small_cell_fraction * cell_volume) {
                slave();
                continue;
            }
            detail::RowWriter row(u);
            face_fluxes(row, u, rec.index, c, &geo.aperture, &fs);
            row.add_weights(fs.unknowns, fs.flux, (c == Component::A ? 1.0 : -1.0) * geo.area);
            if (row.diagonal() == 0.0) {
                slave();
                continue;
            }
            row.flush(tb);
            stats.max_partial_row_nonzeros = std::max(stats.max_partial_row_nonzeros, row.nonzeros());
            rhs[static_cast<std::size_t>(u)] += spec.source(geo.volume_centroid[ci], c) * geo.volume[ci];
        }

        const int ua = map.iface(cell, Component::A), ub = map.iface(cell, Component::B);
        tb.add(ua, ua, 1.0);
        tb.add(ua, ub, -1.0);
        rhs[static_cast<std::size_t>(ua)] = spec.jump_value(geo.interface_centroid);
        {
            detail::RowWriter row(ub);
            row.add_weights(st[0].unknowns, st[0].flux, 1.0);
            row.add_weights(st[1].unknowns, st[1].flux, -1.0);
            row.flush(tb);
            rhs[static_cast<std::size_t>(ub)] = spec.jump_flux(geo.interface_centroid, geo.normal);
        }
    }

    if (stencils_out) *stencils_out = std::move(stencils);
    if (stats_out) *stats_out = stats;
    return SparseSystem{tb.build(), std::move(rhs)};
}

inline Discretization discretize(const EbmProblem& pb, const EbmOptions& opt = {}) {
    auto records = classify(pb.grid, pb.geom);
    UnknownMap map(records);
    Discretization d{std::move(records), std::move(map), {}, {}, {}};
    d.system = assemble(pb.grid, d.records, pb.spec, d.map, opt, &d.stencils, &d.stats);
    return d;
}

/// Exact solution sampled at every unknown (interface unknowns at the interface centroid).
inline std::vector<double> exact_unknowns(const EbmProblem& pb, const Discretization& d) {
    std::vector<double> v(static_cast<std::size_t>(d.map.size()));
    for (int u = 0; u < d.map.size(); ++u) {
        const auto& k = d.map.key(u);
        const auto& rec = d.records[static_cast<std::size_t>(k.cell)];
        const Point x = k.loc == Location::Center ? pb.grid.cell_center(rec.index) : rec.geometry.interface_centroid;
        v[static_cast<std::size_t>(u)] = pb.exact(x, k.comp);
    }
    return v;
}

struct MeasureOptions {
    double tol = 1e-10;
    int max_iter = 20000;
    bool dense = false;  // use the dense direct solver instead of BiCGStab
    EbmOptions ebm;
};

struct MeasureResult {
    int n = 0;
    double linf = 0.0;           // all cell-center unknowns, both components at partial cells
    double linf_occupied = 0.0;  // cell-center unknowns of the component occupying the center
    int iterations = 0;
    double residual = 0.0;
    double seconds = 0.0;
    int unknowns = 0;
    std::int64_t nonzeros = 0;
    AssemblyStats stats;
};

inline MeasureResult solve_and_measure(const EbmProblem& pb, const MeasureOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Discretization d = discretize(pb, opt.ebm);
    MeasureResult m;
    m.n = pb.grid.n(0);
    m.unknowns = d.map.size();
    m.nonzeros = d.system.A.nnz();
    m.stats = d.stats;
    std::vector<double> x;
    if (opt.dense) {
        x = dense_solve(d.system);
        m.residual = relative_residual(d.system, x);
    } else {
        auto res = solve(d.system, opt.tol, opt.max_iter);
        x = std::move(res.x);
        m.iterations = res.stats.iterations;
        m.residual = res.stats.residual;
    }
    for (int u = 0; u < d.map.size(); ++u) {
        const auto& k = d.map.key(u);
        if (k.loc != Location::Center) continue;
        const auto& rec = d.records[static_cast<std::size_t>(k.cell)];
        const Point xc = pb.grid.cell_center(rec.index);
        const double err = std::abs(x[static_cast<std::size_t>(u)] - pb.exact(xc, k.comp));
        m.linf = std::max(m.linf, err);
        const Component occupant = pb.geom.phi(xc) < 0.0 ? Component::A : Component::B;
        if (rec.cls != CellClass::Partial || k.comp == occupant) m.linf_occupied = std::max(m.linf_occupied, err);
    }
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

}  // namespace cgstencil
