// Solves the manufactured sphere interface problem on a few meshes and prints the error table.

#include <cmath>
#include <cstdio>

#include "cgstencil/ebm.hpp"

using namespace cgstencil;

int main() {
    double previous = 0.0;
    std::printf("%6s %14s %8s %6s\n", "mesh", "linf", "order", "iters");
    for (int n : {10, 20}) {
        const auto m = solve_and_measure(manufactured_case(n));
        if (previous > 0.0)
            std::printf("%6d %14.6e %8.3f %6d\n", n, m.linf, std::log2(previous / m.linf), m.iterations);
        else
            std::printf("%6d %14.6e %8s %6d\n", n, m.linf, "-", m.iterations);
        previous = m.linf;
    }
}
