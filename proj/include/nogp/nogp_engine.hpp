#pragma once

#include <vector>

#include "nogp/propagator.hpp"

namespace nogp {

// Per-block samples of C_j(t) = [<psi_m, H(t) psi_k>], taken from the
// initial basis: the Heisenberg identity removes all propagator dependence.
// Node samples support diagnostics; midpoint samples feed the integrator.
struct TransportCoefficients {
    int block = 0;
    double dt = 0.0;
    std::vector<Matrix> at_nodes;     // N + 1
    std::vector<Matrix> at_midpoints; // N

    double max_hermiticity_residual() const;
};

std::vector<TransportCoefficients> transport_coefficients(const DrivenHamiltonian& h,
                                                          const SpectralDecomposition& s,
                                                          int steps);

// Solves i dV/dt = C(t) V, V(0) = I with the exponential-midpoint rule;
// every returned V(t_i) is unitary up to eigensolver accuracy.
std::vector<Matrix> solve_transport(const TransportCoefficients& c);

// Moving orthonormal frame of block j: psi~_k(t_i) = sum_m V(t_i)_mk U(0,t_i) psi_m.
struct ParallelFrame {
    int block = 0;
    double dt = 0.0;
    std::vector<Matrix> samples; // d x d_j per node

    // Finite-difference parallel condition: max over interior nodes of
    // |<psi~_m(t_i), (psi~_k(t_{i+1}) - psi~_k(t_{i-1})) / (2 dt)>|.
    double parallel_residual() const;
    double max_gram_residual() const;
};

ParallelFrame parallel_frame(const PropagatorGrid& p, const std::vector<Matrix>& v,
                             const SpectralDecomposition& s, int block);

struct NogpResiduals {
    double cyclicity = 0.0; // block leakage of the frame endpoints
    double parallel = 0.0;  // finite-difference parallel condition
    double unitarity = 0.0; // worst G_j unitarity residual
};

struct NogpResult {
    std::vector<Matrix> blocks; // G_j, d_j x d_j
    Matrix holonomy;            // U~ = sum_j U~_j, block-diagonal by construction
    NogpResiduals residuals;
    bool cyclic = true;         // false when the cyclicity residual exceeds threshold

    const Matrix& g(int j) const { return blocks[static_cast<size_t>(j)]; }
};

// Phase blocks g_mk = <psi_m, psi~_k(T)> and the assembled holonomy operator.
// cyclic_threshold <= 0 selects the default 1e-6 * d. A non-cyclic evolution
// is flagged, never rejected.
NogpResult extract_phase(const std::vector<ParallelFrame>& frames,
                         const SpectralDecomposition& s, double cyclic_threshold = -1.0);

// Full transport pipeline for one driven period.
NogpResult compute_nogp(const DrivenHamiltonian& h, const SpectralDecomposition& s, int steps);
NogpResult compute_nogp(const DrivenHamiltonian& h, const Observable& x0, int steps);

// Doubles the step count (starting at `initial_steps`) until successive
// G_j estimates differ by less than `tol`, then returns the finer result.
NogpResult compute_nogp_auto(const DrivenHamiltonian& h, const SpectralDecomposition& s,
                             int initial_steps = 2000, double tol = 1e-8,
                             int max_steps = 64000);

// Closed per-block frame psi-bar(t_i) with psi-bar(T) = psi-bar(0).
struct LoopBasis {
    int block = 0;
    double dt = 0.0;
    std::vector<Matrix> samples;
    bool branch_perturbed = false; // a closing eigenphase sat on the -pi cut

    double closure_residual() const;
};

enum class ClosingStyle {
    Geodesic,   // W(t) = exp(-(t/T) log W_T)
    SmoothRamp, // ramp with vanishing end derivatives
};

// Closes the propagated frame U(0,t) psi_block by right-multiplying with a
// unitary interpolation of the endpoint mismatch. Eigenphases of the
// mismatch are taken in (-pi, pi]; a phase at -pi is perturbed by 1e-12.
LoopBasis close_propagated_frame(const PropagatorGrid& p, const SpectralDecomposition& s,
                                 int block, ClosingStyle style = ClosingStyle::Geodesic);

// Hamiltonian-independent route: builds A_j(t) from central finite
// differences of the loop frame, solves i dV/dt = -A_j(t) V, returns V(T).
Matrix phase_via_loop_basis(const LoopBasis& loop, double closure_tol = 1e-8);

// Difference between the geodesic and smooth-ramp closings of the same
// block, reported as a diagnostic for the loop-closing sensitivity.
double loop_closing_sensitivity(const PropagatorGrid& p, const SpectralDecomposition& s,
                                int block);

// Non-Abelian phase of a cyclic state-space loop: C(t) built from
// c_mk = -<U(t) psi_m, H(t) U(t) psi_k>, i dV/dt = C V, G = [<psi_m, psi~_k(T)>].
Matrix state_evolution_phase(const DrivenHamiltonian& h, const PropagatorGrid& p,
                             const Matrix& subspace_basis, double cyclic_tol = 1e-8);

} // namespace nogp
