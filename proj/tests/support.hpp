#pragma once

// Shared generators and brute-force oracles for the test suites.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <set>
#include <vector>

#include "cgstencil/grid.hpp"
#include "cgstencil/interp.hpp"
#include "cgstencil/stencil.hpp"

namespace cgstencil {

// readable failure messages
inline void PrintTo(const GridIndex& g, std::ostream* os) { *os << to_string(g); }
inline void PrintTo(const Direction& d, std::ostream* os) { *os << to_string(d); }

}  // namespace cgstencil

namespace testing_support {

using namespace cgstencil;

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed1234abcdULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

inline int uniform_int(std::mt19937_64& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

/// Random polynomial of total degree <= degree, as coefficient/exponent pairs.
struct RandomPoly {
    int dim = 2;
    std::vector<std::array<int, 3>> exps;
    std::vector<double> coef;

    double operator()(const Point& x) const {
        double s = 0.0;
        for (std::size_t t = 0; t < exps.size(); ++t) {
            double m = coef[t];
            for (int a = 0; a < dim; ++a) m *= std::pow(x[a], exps[t][static_cast<std::size_t>(a)]);
            s += m;
        }
        return s;
    }

    Point grad(const Point& x) const {
        Point g = Point::Zero();
        for (std::size_t t = 0; t < exps.size(); ++t)
            for (int d = 0; d < dim; ++d) {
                const int p = exps[t][static_cast<std::size_t>(d)];
                if (p == 0) continue;
                double m = coef[t] * p;
                for (int a = 0; a < dim; ++a) m *= std::pow(x[a], exps[t][static_cast<std::size_t>(a)] - (a == d ? 1 : 0));
                g[d] += m;
            }
        return g;
    }
};

inline RandomPoly random_poly(std::mt19937_64& g, int dim, int degree) {
    RandomPoly p;
    p.dim = dim;
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j)
            for (int k = 0; i + j + k <= degree; ++k) {
                if (dim == 2 && k > 0) continue;
                p.exps.push_back({i, j, k});
                p.coef.push_back(uniform(g, -1.0, 1.0));
            }
    return p;
}

/// Random availability mask around `center`: each cell within Chebyshev radius 4
/// is available with probability `density`; the center is always available.
inline std::set<GridIndex> random_mask(std::mt19937_64& g, const GridIndex& center, double density) {
    std::set<GridIndex> cells{center};
    const int dim = center.dim;
    const int r = 4;
    std::bernoulli_distribution keep(density);
    for (int dx = -r; dx <= r; ++dx)
        for (int dy = -r; dy <= r; ++dy)
            for (int dz = (dim == 3 ? -r : 0); dz <= (dim == 3 ? r : 0); ++dz) {
                GridIndex c = center;
                c[0] += dx;
                c[1] += dy;
                if (dim == 3) c[2] += dz;
                if (keep(g)) cells.insert(c);
            }
    return cells;
}

/// All offsets with Chebyshev norm exactly L, by exhaustive scan.
inline std::set<GridIndex> brute_shell(const GridIndex& c, int L) {
    std::set<GridIndex> out;
    const int dim = c.dim;
    for (int dx = -L; dx <= L; ++dx)
        for (int dy = -L; dy <= L; ++dy)
            for (int dz = (dim == 3 ? -L : 0); dz <= (dim == 3 ? L : 0); ++dz) {
                if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != L) continue;
                GridIndex g = c;
                g[0] += dx;
                g[1] += dy;
                if (dim == 3) g[2] += dz;
                out.insert(g);
            }
    return out;
}

/// Relative error with a unit floor on the scale.
inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace testing_support
