#include "nogp/connection_geometry.hpp"

#include <cmath>

namespace nogp {

namespace {

// Zeroes the off-block entries of a matrix expressed in the partition basis.
Matrix block_diagonal_part(const Matrix& b, const EigenBasisPartition& part) {
    Matrix out = Matrix::Zero(b.rows(), b.cols());
    int off = 0;
    for (int j = 0; j < part.block_count(); ++j) {
        const int dj = part.block_sizes[static_cast<size_t>(j)];
        out.block(off, off, dj, dj) = b.block(off, off, dj, dj);
        off += dj;
    }
    return out;
}

double off_block_magnitude(const Matrix& b, const EigenBasisPartition& part) {
    return max_abs(b - block_diagonal_part(b, part));
}

Matrix skew_part(const Matrix& m) { return 0.5 * (m - m.adjoint()); }

} // namespace

double LiftCurve::max_unitarity_residual() const {
    double r = 0.0;
    for (const Matrix& u : unitaries) r = std::max(r, unitarity_residual(u));
    return r;
}

bool gauge_group_membership(const Matrix& u, const PartitionFrame& f, double tol) {
    if (!is_unitary(u, std::max(tol, 1e-10)))
        throw NotUnitary("gauge_group_membership: input is not unitary");
    const Matrix& v = f.partition.vectors;
    return off_block_magnitude(v.adjoint() * u * v, f.partition) <= tol;
}

Matrix canonical_connection(const Matrix& p, const Matrix& q, const PartitionFrame& f) {
    if (!is_unitary(p, 1e-8)) throw NotUnitary("canonical_connection: P is not unitary");
    const Matrix& v = f.partition.vectors;
    const Matrix in_frame = v.adjoint() * (p.adjoint() * q) * v;
    return v * block_diagonal_part(in_frame, f.partition) * v.adjoint();
}

double verify_horizontal(const LiftCurve& l, const PartitionFrame& f) {
    if (l.unitaries.size() < 3)
        throw GridTooCoarse("verify_horizontal: need at least 3 samples");
    const double dt = l.dt();
    double res = 0.0;
    for (size_t i = 1; i + 1 < l.unitaries.size(); ++i) {
        const Matrix d = (l.unitaries[i + 1] - l.unitaries[i - 1]) / (2.0 * dt);
        res = std::max(res, max_abs(canonical_connection(l.unitaries[i], d, f)));
    }
    return res;
}

LiftCurve horizontal_lift(const LiftCurve& gamma, const PartitionFrame& f) {
    const size_t n = gamma.unitaries.size() - 1;
    const double dt = gamma.dt();

    // Connection values along Gamma; skew projection keeps the correction
    // steps exactly unitary (the FD contamination is O(dt^2) Hermitian).
    std::vector<Matrix> a(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        Matrix d;
        if (i == 0)
            d = (-3.0 * gamma.unitaries[0] + 4.0 * gamma.unitaries[1] - gamma.unitaries[2]) /
                (2.0 * dt);
        else if (i == n)
            d = (3.0 * gamma.unitaries[n] - 4.0 * gamma.unitaries[n - 1] +
                 gamma.unitaries[n - 2]) /
                (2.0 * dt);
        else
            d = (gamma.unitaries[i + 1] - gamma.unitaries[i - 1]) / (2.0 * dt);
        a[i] = skew_part(canonical_connection(gamma.unitaries[i], d, f));
    }

    LiftCurve out;
    out.times = gamma.times;
    out.unitaries.reserve(n + 1);
    Matrix g = Matrix::Identity(gamma.dim(), gamma.dim());
    out.unitaries.push_back(gamma.unitaries[0]);
    for (size_t i = 0; i < n; ++i) {
        const Matrix amid = 0.5 * (a[i] + a[i + 1]);
        // dG/dt = -A G with A skew: exp(-A dt) = exp(-i (-iA) dt), -iA Hermitian
        g = skew_exp(Matrix(Complex(0.0, -1.0) * amid), dt) * g;
        out.unitaries.push_back(gamma.unitaries[i + 1] * g);
    }
    return out;
}

Matrix holonomy_from_lift(const LiftCurve& l, const PartitionFrame& f, double tol) {
    const Matrix g = l.unitaries.front().adjoint() * l.unitaries.back();
    if (!gauge_group_membership(g, f, tol))
        throw NotClosedBase("holonomy_from_lift: endpoint correction leaves the gauge group");
    return g;
}

LiftCurve backward_lift(const PropagatorGrid& p) {
    LiftCurve l;
    l.times = p.times;
    l.unitaries.reserve(p.unitaries.size());
    for (const Matrix& u : p.unitaries) l.unitaries.push_back(u.adjoint());
    return l;
}

LiftCurve parallel_transport_lift(const std::vector<ParallelFrame>& frames,
                                  const SpectralDecomposition& s) {
    LiftCurve l;
    const size_t n = frames.front().samples.size();
    const int d = s.dim();
    l.times.resize(n);
    l.unitaries.assign(n, Matrix::Zero(d, d));
    for (size_t i = 0; i < n; ++i) {
        l.times[i] = static_cast<double>(i) * frames.front().dt;
        for (int j = 0; j < s.block_count(); ++j)
            l.unitaries[i] += frames[static_cast<size_t>(j)].samples[i] *
                              s.basis.block(j).adjoint();
    }
    return l;
}

} // namespace nogp
