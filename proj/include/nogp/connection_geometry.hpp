#pragma once

#include <vector>

#include "nogp/nogp_engine.hpp"

namespace nogp {

// Orthonormal basis with a fixed block partition; the structure group is
// the set of unitaries block-diagonal in this frame.
struct PartitionFrame {
    EigenBasisPartition partition;

    int dim() const { return partition.dim(); }
};

// Sampled curve of unitaries on a uniform time grid.
struct LiftCurve {
    std::vector<double> times;
    std::vector<Matrix> unitaries;

    double dt() const { return times[1] - times[0]; }
    int dim() const { return static_cast<int>(unitaries.front().rows()); }
    double max_unitarity_residual() const;
};

// True iff U is block-diagonal in the partition basis at tolerance `tol`.
// Throws NotUnitary when U fails unitarity at the same tolerance.
bool gauge_group_membership(const Matrix& u, const PartitionFrame& f, double tol);

// Canonical connection: block-diagonal part (in the partition basis) of
// P^{-1} Q. The output lies in the Lie-algebra space of the gauge group.
Matrix canonical_connection(const Matrix& p, const Matrix& q, const PartitionFrame& f);

// Max over interior nodes of max-abs canonical_connection(U(t_i), dU/dt),
// with dU/dt by central differences. A horizontal lift yields O(dt).
double verify_horizontal(const LiftCurve& l, const PartitionFrame& f);

// Right-corrects Gamma by the solution of dG/dt = -Omega_Gamma[Gamma'] G,
// G(0) = I; the output is horizontal with the same start point.
LiftCurve horizontal_lift(const LiftCurve& gamma, const PartitionFrame& f);

// G = L(0)^{-1} L(T) for a closed horizontal lift; throws NotClosedBase if
// the endpoint correction is not a gauge-group element at `tol`.
Matrix holonomy_from_lift(const LiftCurve& l, const PartitionFrame& f, double tol = 1e-8);

// Lift t -> U(0, t_i) of the Schroedinger evolution (adjoint grid).
LiftCurve backward_lift(const PropagatorGrid& p);

// Lift t -> U~(t) = sum_{j,k} |psi~^(j)_k(t)><psi^(j)_k| built from the
// parallel frames of every block.
LiftCurve parallel_transport_lift(const std::vector<ParallelFrame>& frames,
                                  const SpectralDecomposition& s);

} // namespace nogp
