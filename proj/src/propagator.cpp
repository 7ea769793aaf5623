#include "nogp/propagator.hpp"

#include <cmath>

namespace nogp {

double periodicity_residual(const DrivenHamiltonian& h, int samples) {
    double res = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = h.period * (i + 0.37) / samples;
        res = std::max(res, max_abs(h.sample(t) - h.sample(t + h.period)));
    }
    return res;
}

double PropagatorGrid::max_unitarity_residual() const {
    double res = 0.0;
    for (const Matrix& u : unitaries) res = std::max(res, unitarity_residual(u));
    return res;
}

PropagatorGrid evolve(const DrivenHamiltonian& h, int steps) {
    if (steps < 1) throw Error("evolve: steps must be >= 1");
    const double dt = h.period / steps;

    PropagatorGrid grid;
    grid.times.resize(static_cast<size_t>(steps) + 1);
    grid.unitaries.reserve(static_cast<size_t>(steps) + 1);

    Matrix first = h.sample(0.5 * dt);
    const Eigen::Index d = first.rows();
    grid.unitaries.push_back(Matrix::Identity(d, d));
    grid.times[0] = 0.0;

    for (int i = 0; i < steps; ++i) {
        const double tmid = (i + 0.5) * dt;
        const Matrix hm = (i == 0) ? first : h.sample(tmid);
        if (hermiticity_residual(hm) > kHermiticityTol)
            throw NonHermitianSample("evolve: H(t) not Hermitian at t = " + std::to_string(tmid));
        grid.unitaries.push_back(skew_exp(hm, dt) * grid.unitaries.back());
        grid.times[static_cast<size_t>(i) + 1] = (i + 1) * dt;
    }
    grid.times.back() = h.period;
    return grid;
}

Matrix dyson_series(const DrivenHamiltonian& h, double t, int order, int substeps) {
    if (order < 1) throw Error("dyson_series: order must be >= 1");
    if (substeps < order * 10) throw Error("dyson_series: substeps must be >= 10 * order");

    const double dt = t / substeps;
    const size_t n = static_cast<size_t>(substeps) + 1;

    std::vector<Matrix> hs(n);
    for (size_t i = 0; i < n; ++i) hs[i] = h.sample(static_cast<double>(i) * dt);
    const Eigen::Index d = hs[0].rows();

    // level m iterated integral I_m(s) = int_0^s H I_{m-1}, cumulative trapezoid
    std::vector<Matrix> prev(n, Matrix::Identity(d, d));
    Matrix total = Matrix::Identity(d, d);
    Complex coeff(1.0, 0.0);
    for (int m = 1; m <= order; ++m) {
        std::vector<Matrix> cur(n);
        cur[0] = Matrix::Zero(d, d);
        Matrix f_prev = hs[0] * prev[0];
        for (size_t i = 1; i < n; ++i) {
            const Matrix f = hs[i] * prev[i];
            cur[i] = cur[i - 1] + (0.5 * dt) * (f_prev + f);
            f_prev = f;
        }
        coeff *= Complex(0.0, -1.0);
        total += coeff * cur[n - 1];
        prev = std::move(cur);
    }
    return total;
}

std::vector<Matrix> heisenberg_evolve(const PropagatorGrid& p, const Observable& x0) {
    if (x0.dim() != p.dim())
        throw DimensionMismatch("heisenberg_evolve: observable dimension mismatch");
    std::vector<Matrix> xs;
    xs.reserve(p.unitaries.size());
    for (const Matrix& u : p.unitaries) xs.push_back(u.adjoint() * x0.matrix() * u);
    return xs;
}

double cyclicity_residual(const PropagatorGrid& p, const SpectralDecomposition& s) {
    if (s.dim() != p.dim())
        throw DimensionMismatch("cyclicity_residual: dimension mismatch");
    const Matrix& ut = p.final_unitary();
    double res = 0.0;
    for (const Matrix& e : s.projections)
        res = std::max(res, max_abs(ut.adjoint() * e * ut - e));
    return res;
}

} // namespace nogp
