#pragma once

#include <stdexcept>
#include <string>

namespace cgstencil {

/// No direction/pair/subset combination is fully available under the mask.
struct NoStencil : std::runtime_error {
    explicit NoStencil(const std::string& what) : std::runtime_error("NoStencil: " + what) {}
};

/// Pivoted factorization found the system rank deficient.
struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error("SingularSystem: " + what) {}
};

/// Level set vanishes exactly on a cell corner, or its plane reconstruction misses the cell.
struct DegenerateCut : std::runtime_error {
    explicit DegenerateCut(const std::string& what) : std::runtime_error("DegenerateCut: " + what) {}
};

struct SolverDiverged : std::runtime_error {
    explicit SolverDiverged(const std::string& what) : std::runtime_error("SolverDiverged: " + what) {}
};

struct ZeroDiagonal : std::runtime_error {
    explicit ZeroDiagonal(const std::string& what) : std::runtime_error("ZeroDiagonal: " + what) {}
};

}  // namespace cgstencil
