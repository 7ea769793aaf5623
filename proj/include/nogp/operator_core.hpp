#pragma once

#include <vector>

#include "nogp/errors.hpp"
#include "nogp/types.hpp"

namespace nogp {

// Hermitian matrix, validated at construction.
class Observable {
public:
    explicit Observable(Matrix m, double herm_tol = kHermiticityTol);

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    Matrix m_;
};

// d orthonormal columns grouped into n blocks of sizes [d_1, ..., d_n].
// Block j spans the j-th eigenspace; column order inside a block is fixed
// by the deterministic construction in spectral_decompose.
struct EigenBasisPartition {
    Matrix vectors;               // d x d, orthonormal
    std::vector<int> block_sizes; // [d_1, ..., d_n]

    int dim() const { return static_cast<int>(vectors.rows()); }
    int block_count() const { return static_cast<int>(block_sizes.size()); }
    int block_offset(int j) const;
    // Column index of the k-th vector of block j.
    int column(int j, int k) const { return block_offset(j) + k; }
    // d x d_j slice holding block j.
    Matrix block(int j) const;

    double gram_residual() const;
};

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // strictly increasing
    std::vector<Matrix> projections;  // E_j
    std::vector<int> multiplicities;  // d_j
    EigenBasisPartition basis;
    double cluster_tolerance = 0.0;   // the delta_cluster actually used

    int dim() const { return basis.dim(); }
    int block_count() const { return static_cast<int>(eigenvalues.size()); }
    Matrix reconstruct() const;       // sum_j lambda_j E_j
};

// Eigendecomposition of X with eigenvalues clustered at delta_cluster.
// delta_cluster <= 0 selects the default 1e-8 * (1 + ||X||).
// Deterministic: identical input yields identical output.
SpectralDecomposition spectral_decompose(const Observable& x, double delta_cluster = -1.0);

bool is_unitary(const Matrix& u, double tol);

// exp(-i H tau) through the spectral decomposition of Hermitian H.
Matrix skew_exp(const Matrix& h, double tau, double herm_tol = kHermiticityTol);
Matrix skew_exp(const Observable& h, double tau);

} // namespace nogp
