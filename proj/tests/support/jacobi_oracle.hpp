#pragma once

#include <vector>

#include "nogp/types.hpp"

namespace nogp::testing {

// Textbook cyclic Jacobi eigensolver for complex Hermitian matrices.
// Independent of the Eigen-backed production path; used as the oracle for
// spectral decompositions.
struct JacobiEigen {
    std::vector<double> eigenvalues; // ascending
    Matrix eigenvectors;             // columns, same order
};

JacobiEigen jacobi_eigensolve(const Matrix& h, int max_sweeps = 64, double tol = 1e-14);

} // namespace nogp::testing
