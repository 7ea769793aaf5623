#include "nogp/nogp_engine.hpp"

#include <cmath>
#include <numbers>

namespace nogp {

namespace {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Central differences at interior nodes, second-order one-sided at the ends.
Matrix fd_derivative(const std::vector<Matrix>& f, size_t i, double dt) {
    const size_t n = f.size() - 1;
    if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    if (i == n) return (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * dt);
    return (f[i + 1] - f[i - 1]) / (2.0 * dt);
}

} // namespace

double TransportCoefficients::max_hermiticity_residual() const {
    double r = 0.0;
    for (const Matrix& c : at_nodes) r = std::max(r, hermiticity_residual(c));
    for (const Matrix& c : at_midpoints) r = std::max(r, hermiticity_residual(c));
    return r;
}

std::vector<TransportCoefficients> transport_coefficients(const DrivenHamiltonian& h,
                                                          const SpectralDecomposition& s,
                                                          int steps) {
    const double dt = h.period / steps;
    const Matrix probe = h.sample(0.0);
    if (probe.rows() != s.dim())
        throw DimensionMismatch("transport_coefficients: dimension mismatch");

    std::vector<TransportCoefficients> out(static_cast<size_t>(s.block_count()));
    for (int j = 0; j < s.block_count(); ++j) {
        out[static_cast<size_t>(j)].block = j;
        out[static_cast<size_t>(j)].dt = dt;
        out[static_cast<size_t>(j)].at_nodes.reserve(static_cast<size_t>(steps) + 1);
        out[static_cast<size_t>(j)].at_midpoints.reserve(static_cast<size_t>(steps));
    }

    auto append = [&](double t, bool midpoint) {
        const Matrix ht = h.sample(t);
        for (int j = 0; j < s.block_count(); ++j) {
            const Matrix b = s.basis.block(j);
            Matrix c = b.adjoint() * ht * b;
            c = hermitize(c); // exact for Hermitian H(t); drops roundoff skew
            auto& dst = out[static_cast<size_t>(j)];
            (midpoint ? dst.at_midpoints : dst.at_nodes).push_back(std::move(c));
        }
    };

    for (int i = 0; i <= steps; ++i) append(i * dt, false);
    for (int i = 0; i < steps; ++i) append((i + 0.5) * dt, true);
    return out;
}

std::vector<Matrix> solve_transport(const TransportCoefficients& c) {
    const size_t n = c.at_midpoints.size();
    const Eigen::Index dj = c.at_nodes.front().rows();
    std::vector<Matrix> v;
    v.reserve(n + 1);
    v.push_back(Matrix::Identity(dj, dj));
    for (size_t i = 0; i < n; ++i) v.push_back(skew_exp(c.at_midpoints[i], c.dt) * v.back());
    return v;
}

double ParallelFrame::parallel_residual() const {
    double r = 0.0;
    for (size_t i = 1; i + 1 < samples.size(); ++i) {
        const Matrix d = (samples[i + 1] - samples[i - 1]) / (2.0 * dt);
        r = std::max(r, max_abs(samples[i].adjoint() * d));
    }
    return r;
}

double ParallelFrame::max_gram_residual() const {
    double r = 0.0;
    for (const Matrix& f : samples) r = std::max(r, unitarity_residual(f.adjoint() * f));
    return r;
}

ParallelFrame parallel_frame(const PropagatorGrid& p, const std::vector<Matrix>& v,
                             const SpectralDecomposition& s, int block) {
    if (v.size() != p.unitaries.size())
        throw GridMismatch("parallel_frame: transport grid does not match propagator grid");
    const Matrix b = s.basis.block(block);
    ParallelFrame frame;
    frame.block = block;
    frame.dt = p.dt();
    frame.samples.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        frame.samples.push_back(p.unitaries[i].adjoint() * b * v[i]);
    return frame;
}

NogpResult extract_phase(const std::vector<ParallelFrame>& frames,
                         const SpectralDecomposition& s, double cyclic_threshold) {
    const int d = s.dim();
    if (cyclic_threshold <= 0.0) cyclic_threshold = 1e-6 * d;

    NogpResult res;
    res.holonomy = Matrix::Zero(d, d);

    double leak = 0.0;
    double par = 0.0;
    double unit = 0.0;
    for (int j = 0; j < s.block_count(); ++j) {
        const ParallelFrame& f = frames[static_cast<size_t>(j)];
        const Matrix b = s.basis.block(j);
        const Matrix& end = f.samples.back();

        Matrix g = b.adjoint() * end;
        leak = std::max(leak, max_abs(end - b * g)); // out-of-block component
        par = std::max(par, f.parallel_residual());
        unit = std::max(unit, unitarity_residual(g));

        res.holonomy += b * g * b.adjoint();
        res.blocks.push_back(std::move(g));
    }
    res.residuals = {leak, par, unit};
    res.cyclic = leak <= cyclic_threshold;
    return res;
}

NogpResult compute_nogp(const DrivenHamiltonian& h, const SpectralDecomposition& s, int steps) {
    const PropagatorGrid p = evolve(h, steps);
    const auto cs = transport_coefficients(h, s, steps);
    std::vector<ParallelFrame> frames;
    frames.reserve(cs.size());
    for (int j = 0; j < s.block_count(); ++j)
        frames.push_back(parallel_frame(p, solve_transport(cs[static_cast<size_t>(j)]), s, j));
    return extract_phase(frames, s);
}

NogpResult compute_nogp(const DrivenHamiltonian& h, const Observable& x0, int steps) {
    return compute_nogp(h, spectral_decompose(x0), steps);
}

NogpResult compute_nogp_auto(const DrivenHamiltonian& h, const SpectralDecomposition& s,
                             int initial_steps, double tol, int max_steps) {
    NogpResult coarse = compute_nogp(h, s, initial_steps);
    for (int n = 2 * initial_steps; n <= max_steps; n *= 2) {
        NogpResult fine = compute_nogp(h, s, n);
        double diff = 0.0;
        for (size_t j = 0; j < fine.blocks.size(); ++j)
            diff = std::max(diff, max_abs(fine.blocks[j] - coarse.blocks[j]));
        if (diff < tol) return fine;
        coarse = std::move(fine);
    }
    return coarse;
}

double LoopBasis::closure_residual() const {
    return max_abs(samples.back() - samples.front());
}

namespace {

// Principal log of a unitary via Schur form; eigenphases in (-pi, pi],
// a phase at -pi perturbed by 1e-12 and flagged.
struct UnitaryLog {
    Matrix q;
    Eigen::VectorXd phases;
    bool perturbed = false;
};

UnitaryLog unitary_eigenphases(const Matrix& w) {
    Eigen::ComplexSchur<Matrix> schur(w);
    if (schur.info() != Eigen::Success) throw Error("loop closing: Schur decomposition failed");
    UnitaryLog out;
    out.q = schur.matrixU();
    out.phases.resize(w.rows());
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        double ph = std::arg(schur.matrixT()(i, i));
        if (ph <= -std::numbers::pi + 1e-12) {
            ph = -std::numbers::pi + 1e-12;
            out.perturbed = true;
        }
        out.phases(i) = ph;
    }
    return out;
}

} // namespace

LoopBasis close_propagated_frame(const PropagatorGrid& p, const SpectralDecomposition& s,
                                 int block, ClosingStyle style) {
    const Matrix b = s.basis.block(block);
    const size_t n = p.unitaries.size();

    // Endpoint mismatch <psi_m, psi_k(T)>, unitarized by polar projection.
    Matrix wt = b.adjoint() * (p.final_unitary().adjoint() * b);
    Eigen::JacobiSVD<Matrix> svd(wt, Eigen::ComputeThinU | Eigen::ComputeThinV);
    wt = svd.matrixU() * svd.matrixV().adjoint();

    const UnitaryLog lg = unitary_eigenphases(wt);

    LoopBasis loop;
    loop.block = block;
    loop.dt = p.dt();
    loop.branch_perturbed = lg.perturbed;
    loop.samples.reserve(n);
    const double period = p.period();
    for (size_t i = 0; i < n; ++i) {
        double u = p.times[i] / period;
        if (style == ClosingStyle::SmoothRamp)
            u = u - std::sin(2.0 * std::numbers::pi * u) / (2.0 * std::numbers::pi);
        Vector diag(lg.phases.size());
        for (Eigen::Index k = 0; k < lg.phases.size(); ++k)
            diag(k) = std::exp(Complex(0.0, -u * lg.phases(k)));
        const Matrix w = lg.q * diag.asDiagonal() * lg.q.adjoint(); // exp(-u log W_T)
        loop.samples.push_back(p.unitaries[i].adjoint() * b * w);
    }
    return loop;
}

Matrix phase_via_loop_basis(const LoopBasis& loop, double closure_tol) {
    const double gap = loop.closure_residual();
    if (gap > closure_tol)
        throw NotClosed("phase_via_loop_basis: loop closure residual " + std::to_string(gap));

    const size_t n = loop.samples.size() - 1;
    const Eigen::Index dj = loop.samples.front().cols();
    if (n < 2) throw GridTooCoarse("phase_via_loop_basis: need at least 3 samples");

    // A(t_i) = i <psi-bar_m, d/dt psi-bar_k>, Hermitian up to O(dt^2)
    std::vector<Matrix> a(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        const Matrix d = fd_derivative(loop.samples, i, loop.dt);
        a[i] = hermitize(Complex(0.0, 1.0) * (loop.samples[i].adjoint() * d));
    }

    // i dV/dt = -A(t) V  =>  step exp(+i A dt)
    Matrix v = Matrix::Identity(dj, dj);
    for (size_t i = 0; i < n; ++i) {
        const Matrix amid = 0.5 * (a[i] + a[i + 1]);
        v = skew_exp(-amid, loop.dt) * v;
    }
    return v;
}

double loop_closing_sensitivity(const PropagatorGrid& p, const SpectralDecomposition& s,
                                int block) {
    const Matrix g1 = phase_via_loop_basis(close_propagated_frame(p, s, block, ClosingStyle::Geodesic));
    const Matrix g2 = phase_via_loop_basis(close_propagated_frame(p, s, block, ClosingStyle::SmoothRamp));
    return max_abs(g1 - g2);
}

Matrix state_evolution_phase(const DrivenHamiltonian& h, const PropagatorGrid& p,
                             const Matrix& subspace_basis, double cyclic_tol) {
    const Eigen::Index m = subspace_basis.cols();
    if (subspace_basis.rows() != p.dim())
        throw DimensionMismatch("state_evolution_phase: basis dimension mismatch");

    // U(T) must map the subspace onto itself.
    const Matrix endb = p.final_unitary() * subspace_basis;
    const Matrix overlap = subspace_basis.adjoint() * endb;
    const double leak = max_abs(endb - subspace_basis * overlap);
    if (leak > cyclic_tol)
        throw NotCyclicSubspace("state_evolution_phase: subspace leakage " +
                                std::to_string(leak));

    const size_t n = p.unitaries.size();
    std::vector<Matrix> c(n);
    for (size_t i = 0; i < n; ++i) {
        const Matrix ui = p.unitaries[i] * subspace_basis; // U(t_i) psi
        c[i] = hermitize(-(ui.adjoint() * h.sample(p.times[i]) * ui));
    }

    // i dV/dt = C(t) V with trapezoidal midpoint values
    Matrix v = Matrix::Identity(m, m);
    for (size_t i = 0; i + 1 < n; ++i) {
        const Matrix cmid = 0.5 * (c[i] + c[i + 1]);
        v = skew_exp(cmid, p.dt()) * v;
    }

    // G = [<psi_m, psi~_k(T)>], psi~_k(T) = sum_m v_mk(T) U(T) psi_m
    return subspace_basis.adjoint() * (p.final_unitary() * subspace_basis) * v;
}

} // namespace nogp
