#pragma once

#include <string>

#include "nogp/propagator.hpp"

namespace nogp {

enum class PulseShape { Constant, SinSquared, Bump };

PulseShape pulse_shape_from_name(const std::string& name); // const | sin2 | bump
std::string pulse_shape_name(PulseShape shape);

// T-periodic drive envelope with unit pulse area: integral over one period
// is pi for every shape.
struct Pulse {
    PulseShape shape = PulseShape::Constant;
    double period = 1.0;

    double omega(double t) const;       // envelope value
    double phase(double t) const;       // closed-form integral of omega from 0 to t
    double simpson_area(int panels = 512) const;
};

// Parameters of the three-level lambda system: coupling amplitudes
// (omega0, omega1) with |omega0|^2 + |omega1|^2 = 1, the drive pulse, and
// the block-1 basis angles (phi, varphi). Gate angles (theta, vartheta)
// fix the amplitudes through omega0 = e^{i vartheta} sin(theta/2),
// omega1 = -cos(theta/2).
struct ThreeLevelParams {
    Complex omega0{1.0, 0.0};
    Complex omega1{0.0, 0.0};
    Pulse pulse;
    double phi = 0.0;
    double varphi = 0.0;

    static ThreeLevelParams from_gate_angles(double theta, double vartheta, Pulse pulse);

    // Throws on |omega0|^2 + |omega1|^2 != 1 or pulse area != pi.
    void validate() const;

    Vector bright_state() const; // |b> = conj(omega0)|0> + conj(omega1)|1>
    Vector dark_state() const;   // |d> = -omega1|0> + omega0|1>

    // Columns [psi^(1)_1, psi^(1)_2, psi^(2)_1] from the basis angles.
    Matrix initial_basis() const;
};

// H(t) = Omega(t) (|2><b| + |b><2|)
DrivenHamiltonian build_hamiltonian(const ThreeLevelParams& p);

// |d><d| + cos(Phi(t)) (|b><b| + |2><2|) - i sin(Phi(t)) (|2><b| + |b><2|)
Matrix closed_form_propagator(const ThreeLevelParams& p, double t);

// [[cos t, e^{-i v} sin t], [e^{i v} sin t, -cos t]]; Hermitian, unitary,
// trace 0, det -1.
Matrix closed_form_g1(double theta, double vartheta);

Complex closed_form_g2(); // exactly -1

// X0 = lambda1 (|0><0| + |1><1|) + lambda2 |2><2|
Observable default_observable(double lambda1 = 1.0, double lambda2 = 2.0);

} // namespace nogp
