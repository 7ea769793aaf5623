#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "nogp/connection_geometry.hpp"
#include "nogp/three_level.hpp"
#include "nogp/zero_scanner.hpp"
#include "support/random_systems.hpp"

using namespace nogp;

namespace {

constexpr double kPi = std::numbers::pi;

PartitionFrame standard_frame_21() {
    PartitionFrame f;
    f.partition.vectors = Matrix::Identity(3, 3);
    f.partition.block_sizes = {2, 1};
    return f;
}

Matrix random_block_unitary(std::mt19937& rng, const std::vector<int>& blocks) {
    int d = 0;
    for (int b : blocks) d += b;
    Matrix g = Matrix::Zero(d, d);
    int off = 0;
    for (int b : blocks) {
        g.block(off, off, b, b) = testing::random_unitary(rng, b);
        off += b;
    }
    return g;
}

struct GoldenGeometry {
    SpectralDecomposition spec;
    PropagatorGrid grid;
    std::vector<ParallelFrame> frames;
    NogpResult result;
};

GoldenGeometry golden_run(PulseShape shape, int steps) {
    const ThreeLevelParams p =
        ThreeLevelParams::from_gate_angles(1.234, 0.77, Pulse{shape, 4.0});
    const DrivenHamiltonian h = build_hamiltonian(p);
    GoldenGeometry g{spectral_decompose(default_observable()), evolve(h, steps), {}, {}};
    const auto cs = transport_coefficients(h, g.spec, steps);
    for (int j = 0; j < g.spec.block_count(); ++j)
        g.frames.push_back(
            parallel_frame(g.grid, solve_transport(cs[static_cast<size_t>(j)]), g.spec, j));
    g.result = extract_phase(g.frames, g.spec);
    return g;
}

} // namespace

TEST_CASE("gauge_group_membership") {
    const PartitionFrame f = standard_frame_21();
    std::mt19937 rng(3);

    SUBCASE("block-diagonal unitaries belong") {
        const Matrix g = random_block_unitary(rng, {2, 1});
        CHECK(gauge_group_membership(g, f, 1e-10));
    }
    SUBCASE("a cross-block permutation does not") {
        Matrix perm = Matrix::Zero(3, 3);
        perm(0, 2) = 1.0;
        perm(2, 0) = 1.0;
        perm(1, 1) = 1.0;
        CHECK_FALSE(gauge_group_membership(perm, f, 1e-10));
    }
    SUBCASE("non-unitary input is rejected") {
        CHECK_THROWS_AS(gauge_group_membership(Matrix::Zero(3, 3), f, 1e-10), NotUnitary);
    }
    SUBCASE("the assembled holonomy of the golden run belongs") {
        const GoldenGeometry g = golden_run(PulseShape::SinSquared, 2000);
        CHECK(gauge_group_membership(g.result.holonomy, f, 1e-8));
    }
}

TEST_CASE("canonical_connection") {
    const PartitionFrame f = standard_frame_21();
    std::mt19937 rng(5);

    SUBCASE("P = I keeps the block-diagonal part") {
        const Matrix q = random_block_unitary(rng, {2, 1});
        CHECK(max_abs(canonical_connection(Matrix::Identity(3, 3), q, f) - q) < 1e-14);
    }
    SUBCASE("purely off-block input maps to zero") {
        Matrix q = Matrix::Zero(3, 3);
        q(0, 2) = Complex(0.3, -0.2);
        q(2, 1) = Complex(-1.1, 0.4);
        CHECK(max_abs(canonical_connection(Matrix::Identity(3, 3), q, f)) < 1e-14);
    }
    SUBCASE("vertical tangents P G' recover the generator") {
        const Matrix p = testing::random_unitary(rng, 3);
        Matrix gen = Matrix::Zero(3, 3);
        gen.block(0, 0, 2, 2) = testing::random_hermitian(rng, 2) * Complex(0.0, 1.0);
        gen(2, 2) = Complex(0.0, 0.8);
        const Matrix q = p * gen;
        CHECK(max_abs(canonical_connection(p, q, f) - gen) < 1e-13);
    }
    SUBCASE("linearity in Q") {
        const Matrix p = testing::random_unitary(rng, 3);
        const Matrix q1 = testing::random_hermitian(rng, 3);
        const Matrix q2 = testing::random_hermitian(rng, 3);
        const Complex a(0.7, -0.3);
        const Matrix lhs = canonical_connection(p, Matrix(a * q1 + q2), f);
        const Matrix rhs =
            a * canonical_connection(p, q1, f) + canonical_connection(p, q2, f);
        CHECK(max_abs(lhs - rhs) < 1e-13);
    }
    SUBCASE("gauge transformation law") {
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix p = testing::random_unitary(rng, 3);
            Matrix q(3, 3);
            std::normal_distribution<double> gauss;
            for (int c = 0; c < 3; ++c)
                for (int r = 0; r < 3; ++r) q(r, c) = Complex(gauss(rng), gauss(rng));
            const Matrix g = random_block_unitary(rng, {2, 1});
            const Matrix lhs = canonical_connection(p * g, q * g, f);
            const Matrix rhs = g.adjoint() * canonical_connection(p, q, f) * g;
            CHECK(max_abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("free action: U G = U forces G = I") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix u = testing::random_unitary(rng, 3);
        const Matrix g = random_block_unitary(rng, {2, 1});
        const Matrix fixed = u.adjoint() * (u * g); // solve U G = U for G
        if (max_abs(u * g - u) < 1e-12) CHECK(max_abs(g - Matrix::Identity(3, 3)) < 1e-12);
        CHECK(max_abs(fixed - g) < 1e-12);
    }
}

TEST_CASE("verify_horizontal") {
    const PartitionFrame f = standard_frame_21();

    SUBCASE("a constant lift is horizontal") {
        std::mt19937 rng(13);
        LiftCurve l;
        const Matrix u = testing::random_unitary(rng, 3);
        for (int i = 0; i <= 10; ++i) {
            l.times.push_back(0.1 * i);
            l.unitaries.push_back(u);
        }
        CHECK(verify_horizontal(l, f) < 1e-14);
    }
    SUBCASE("too few samples are rejected") {
        LiftCurve l;
        l.times = {0.0, 1.0};
        l.unitaries = {Matrix::Identity(3, 3), Matrix::Identity(3, 3)};
        CHECK_THROWS_AS(verify_horizontal(l, f), GridTooCoarse);
    }
    SUBCASE("the parallel-transport lift of the golden run is horizontal") {
        const GoldenGeometry g = golden_run(PulseShape::SinSquared, 4000);
        const LiftCurve lift = parallel_transport_lift(g.frames, g.spec);
        CHECK(verify_horizontal(lift, f) < 1e-6);
    }
    SUBCASE("a detuned drive makes the raw lift non-horizontal") {
        // with an in-block coupling the raw Schroedinger lift picks up a
        // connection component of the size of the coupling
        const ThreeLevelParams p =
            ThreeLevelParams::from_gate_angles(1.234, 0.77, Pulse{PulseShape::Constant, 1.0});
        const DrivenHamiltonian h = build_floquet_hamiltonian_with_delta(0.497, p);
        const PropagatorGrid grid = evolve(h, 2000);
        CHECK(verify_horizontal(backward_lift(grid), f) > 1e-2);
    }
}

TEST_CASE("horizontal_lift") {
    const PartitionFrame f = standard_frame_21();

    SUBCASE("an already horizontal lift is unchanged") {
        const GoldenGeometry g = golden_run(PulseShape::SinSquared, 2000);
        const LiftCurve lift = parallel_transport_lift(g.frames, g.spec);
        const LiftCurve again = horizontal_lift(lift, f);
        double diff = 0.0;
        for (size_t i = 0; i < lift.unitaries.size(); i += 100)
            diff = std::max(diff, max_abs(lift.unitaries[i] - again.unitaries[i]));
        CHECK(diff < 1e-9);
    }
    SUBCASE("correcting the raw Schroedinger lift reproduces the parallel frames") {
        const GoldenGeometry g = golden_run(PulseShape::SinSquared, 4000);
        const LiftCurve raw = backward_lift(g.grid);
        const LiftCurve lifted = horizontal_lift(raw, f);
        CHECK(lifted.max_unitarity_residual() < 1e-10);
        const LiftCurve expect = parallel_transport_lift(g.frames, g.spec);
        double diff = 0.0;
        for (size_t i = 0; i < lifted.unitaries.size(); i += 200)
            diff = std::max(diff, max_abs(lifted.unitaries[i] - expect.unitaries[i]));
        CHECK(diff < 1e-6);

        // idempotence: lifting the corrected lift changes nothing
        const LiftCurve again = horizontal_lift(lifted, f);
        double idem = 0.0;
        for (size_t i = 0; i < lifted.unitaries.size(); i += 200)
            idem = std::max(idem, max_abs(again.unitaries[i] - lifted.unitaries[i]));
        CHECK(idem < 1e-9);
    }
    SUBCASE("holonomy of the closed corrected lift carries the phase blocks") {
        const GoldenGeometry g = golden_run(PulseShape::Constant, 4000);
        const LiftCurve lifted = horizontal_lift(backward_lift(g.grid), f);
        const Matrix hol = holonomy_from_lift(lifted, f);
        CHECK(max_abs(hol.block(0, 0, 2, 2) - closed_form_g1(1.234, 0.77)) < 1e-6);
        CHECK(std::abs(hol(2, 2) - closed_form_g2()) < 1e-6);
    }
}

TEST_CASE("holonomy_from_lift") {
    const PartitionFrame f = standard_frame_21();

    SUBCASE("a constant lift has trivial holonomy") {
        std::mt19937 rng(17);
        LiftCurve l;
        const Matrix u = testing::random_unitary(rng, 3);
        for (int i = 0; i <= 4; ++i) {
            l.times.push_back(0.25 * i);
            l.unitaries.push_back(u);
        }
        CHECK(max_abs(holonomy_from_lift(l, f) - Matrix::Identity(3, 3)) < 1e-12);
    }
    SUBCASE("an open base curve is rejected") {
        std::mt19937 rng(19);
        LiftCurve l;
        l.times = {0.0, 0.5, 1.0};
        l.unitaries = {Matrix::Identity(3, 3), testing::random_unitary(rng, 3),
                       testing::random_unitary(rng, 3)};
        CHECK_THROWS_AS(holonomy_from_lift(l, f), NotClosedBase);
    }
    SUBCASE("holonomy matches the engine blocks and squares over two periods") {
        const GoldenGeometry g = golden_run(PulseShape::SinSquared, 4000);
        const LiftCurve lift = parallel_transport_lift(g.frames, g.spec);
        const Matrix hol = holonomy_from_lift(lift, f);
        CHECK(gauge_group_membership(hol, f, 1e-8));
        CHECK(max_abs(hol.block(0, 0, 2, 2) - g.result.g(0)) < 1e-8);

        // traversing the loop twice composes the holonomy: the second pass
        // is the equivariant lift starting from the first endpoint
        LiftCurve twice = lift;
        const Matrix end = lift.unitaries.back();
        for (size_t i = 1; i < lift.unitaries.size(); ++i) {
            twice.times.push_back(lift.times.back() + lift.times[i]);
            twice.unitaries.push_back(lift.unitaries[i] * end);
        }
        const Matrix hol2 = holonomy_from_lift(twice, f);
        CHECK(max_abs(hol2 - hol * hol) < 1e-7);
    }
}
