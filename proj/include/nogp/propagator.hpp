#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nogp/operator_core.hpp"

namespace nogp {

// T-periodic time-dependent Hamiltonian t -> H(t). Hermiticity is enforced
// where samples are consumed (evolve throws NonHermitianSample).
struct DrivenHamiltonian {
    double period = 1.0;
    std::function<Matrix(double)> eval;
    std::string label;

    Matrix sample(double t) const { return eval(t); }
};

// Residual of T-periodicity, max over `samples` probe points.
double periodicity_residual(const DrivenHamiltonian& h, int samples = 16);

// Sampled propagator U(t_i, 0) on the uniform grid 0 = t_0 < ... < t_N = T.
// By construction U(t_i,0) = U_step(t_{i-1} -> t_i) * U(t_{i-1},0).
struct PropagatorGrid {
    std::vector<double> times;
    std::vector<Matrix> unitaries;

    int steps() const { return static_cast<int>(times.size()) - 1; }
    double dt() const { return times[1] - times[0]; }
    double period() const { return times.back(); }
    int dim() const { return static_cast<int>(unitaries.front().rows()); }
    const Matrix& at(int i) const { return unitaries[static_cast<size_t>(i)]; }
    const Matrix& final_unitary() const { return unitaries.back(); }

    double max_unitarity_residual() const;
};

// Exponential-midpoint (second-order Magnus) integration of the operator
// Schroedinger equation over one period.
PropagatorGrid evolve(const DrivenHamiltonian& h, int steps);

// Truncated Dyson series I + sum_{m<=order} (-i)^m iterated integrals, via
// nested trapezoid quadrature. Low-order independent oracle, not a
// production integrator.
Matrix dyson_series(const DrivenHamiltonian& h, double t, int order, int substeps);

// Heisenberg evolution X(t_i) = U(0,t_i) X0 U(t_i,0), with U(0,t) = U(t,0)^dagger.
std::vector<Matrix> heisenberg_evolve(const PropagatorGrid& p, const Observable& x0);

// max_j max-abs(U(0,T) E_j U(T,0) - E_j); zero iff every spectral
// projection returns to itself after one period.
double cyclicity_residual(const PropagatorGrid& p, const SpectralDecomposition& s);

} // namespace nogp
