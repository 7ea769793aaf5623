#include "nogp/operator_core.hpp"

#include <algorithm>
#include <cmath>

namespace nogp {

Observable::Observable(Matrix m, double herm_tol) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.rows() != m_.cols())
        throw DimensionMismatch("Observable: matrix must be square with dim >= 1");
    if (!all_finite(m_))
        throw NonHermitianInput("Observable: entries must be finite");
    const double res = hermiticity_residual(m_);
    if (res > herm_tol)
        throw NonHermitianInput("Observable: Hermiticity residual " + std::to_string(res));
}

int EigenBasisPartition::block_offset(int j) const {
    int off = 0;
    for (int i = 0; i < j; ++i) off += block_sizes[i];
    return off;
}

Matrix EigenBasisPartition::block(int j) const {
    return vectors.middleCols(block_offset(j), block_sizes[j]);
}

double EigenBasisPartition::gram_residual() const {
    return unitarity_residual(vectors);
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix x = Matrix::Zero(dim(), dim());
    for (int j = 0; j < block_count(); ++j) x += eigenvalues[j] * projections[j];
    return x;
}

namespace {

// Modified Gram-Schmidt with largest-residual-first pivoting. The raw
// eigenvectors of a degenerate cluster are already near-orthonormal; the
// pivot order fixes the output uniquely.
Matrix pivoted_orthonormalize(const Matrix& raw) {
    const Eigen::Index d = raw.rows();
    const Eigen::Index m = raw.cols();
    Matrix work = raw;
    Matrix out(d, m);
    std::vector<bool> used(static_cast<size_t>(m), false);
    for (Eigen::Index step = 0; step < m; ++step) {
        Eigen::Index pivot = -1;
        double best = -1.0;
        for (Eigen::Index c = 0; c < m; ++c) {
            if (used[static_cast<size_t>(c)]) continue;
            const double n = work.col(c).norm();
            if (n > best) {
                best = n;
                pivot = c;
            }
        }
        used[static_cast<size_t>(pivot)] = true;
        Vector v = work.col(pivot) / best;
        out.col(step) = v;
        for (Eigen::Index c = 0; c < m; ++c) {
            if (used[static_cast<size_t>(c)]) continue;
            work.col(c) -= v * (v.adjoint() * work.col(c))(0, 0);
        }
    }
    return out;
}

} // namespace

SpectralDecomposition spectral_decompose(const Observable& x, double delta_cluster) {
    const Matrix& m = x.matrix();
    const Eigen::Index d = m.rows();
    if (delta_cluster <= 0.0) delta_cluster = 1e-8 * (1.0 + max_abs(m));

    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
        throw Error("spectral_decompose: eigensolver failed");
    const Eigen::VectorXd w = es.eigenvalues(); // ascending
    const Matrix v = es.eigenvectors();

    SpectralDecomposition out;
    out.cluster_tolerance = delta_cluster;
    out.basis.vectors = Matrix(d, d);

    Eigen::Index col = 0;
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index stop = start + 1;
        while (stop < d && w(stop) - w(stop - 1) <= delta_cluster) ++stop;
        const double spread = w(stop - 1) - w(start);
        if (spread > 10.0 * delta_cluster)
            throw DegenerateClustering(
                "spectral_decompose: eigenvalue chain of spread " + std::to_string(spread) +
                " exceeds 10 * delta_cluster");

        const Eigen::Index dj = stop - start;
        const Matrix basis = pivoted_orthonormalize(v.middleCols(start, dj));
        out.basis.vectors.middleCols(col, dj) = basis;
        out.basis.block_sizes.push_back(static_cast<int>(dj));
        out.eigenvalues.push_back(w.segment(start, dj).mean());
        out.projections.push_back(basis * basis.adjoint());
        out.multiplicities.push_back(static_cast<int>(dj));
        col += dj;
        start = stop;
    }
    return out;
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols())
        throw DimensionMismatch("is_unitary: matrix must be square");
    return unitarity_residual(u) <= tol;
}

Matrix skew_exp(const Matrix& h, double tau, double herm_tol) {
    const double res = hermiticity_residual(h);
    if (res > herm_tol)
        throw NonHermitianInput("skew_exp: Hermiticity residual " + std::to_string(res));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw Error("skew_exp: eigensolver failed");
    const Eigen::VectorXd w = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    Vector ph(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        ph(i) = std::exp(Complex(0.0, -w(i) * tau));
    return v * ph.asDiagonal() * v.adjoint();
}

Matrix skew_exp(const Observable& h, double tau) {
    return skew_exp(h.matrix(), tau);
}

} // namespace nogp
