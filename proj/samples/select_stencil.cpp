// Selects a 2D quadratic stencil near a blocked region and fits a polynomial on it.

#include <iostream>

#include "cgstencil/interp.hpp"
#include "cgstencil/stencil.hpp"

using namespace cgstencil;

int main() {
    // cells west of x = 4 are unavailable
    const AvailabilityMask mask = [](const GridIndex& g) { return g[0] >= 4; };
    const GridIndex center(5, 5);
    const auto sel = select_2d_quadratic(center, mask, kSouth);

    std::cout << "choices: " << sel.choices.describe() << "\nnodes:";
    for (const auto& g : sel.nodes) std::cout << ' ' << to_string(g);
    std::cout << '\n';

    const GridSpec grid = GridSpec::cube(2, 10, 0.0, 1.0);
    const auto pts = node_points(sel, grid);
    std::vector<double> vals;
    for (const auto& p : pts) vals.push_back(1.0 + p.x() - 2.0 * p.x() * p.y() + 0.5 * p.y() * p.y());
    const auto f = fit(pts, vals, MonomialBasis(2, 2), LocalFrame{grid.cell_center(center), grid.h()});

    const Point q(0.42, 0.61, 0.0);
    std::cout << "value at (0.42, 0.61): " << evaluate(f, q) << " (exact "
              << 1.0 + q.x() - 2.0 * q.x() * q.y() + 0.5 * q.y() * q.y() << ")\n";
    std::cout << "condition: " << f.condition << '\n';
}
