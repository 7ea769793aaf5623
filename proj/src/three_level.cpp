#include "nogp/three_level.hpp"

#include <cmath>
#include <numbers>

namespace nogp {

namespace {
constexpr double kPi = std::numbers::pi;
// Bump profile w(u) = u(1-u)(1+u/2), area 5/24 over [0,1]. Asymmetric, and
// its derivative jumps across the period wrap, so the integrator error is
// genuinely second order (used by the convergence-ratio tests).
constexpr double kBumpArea = 5.0 / 24.0;
} // namespace

PulseShape pulse_shape_from_name(const std::string& name) {
    if (name == "const") return PulseShape::Constant;
    if (name == "sin2") return PulseShape::SinSquared;
    if (name == "bump") return PulseShape::Bump;
    throw Error("unknown pulse shape: " + name);
}

std::string pulse_shape_name(PulseShape shape) {
    switch (shape) {
        case PulseShape::Constant: return "const";
        case PulseShape::SinSquared: return "sin2";
        case PulseShape::Bump: return "bump";
    }
    return "?";
}

double Pulse::omega(double t) const {
    const double u = t / period - std::floor(t / period);
    switch (shape) {
        case PulseShape::Constant:
            return kPi / period;
        case PulseShape::SinSquared: {
            const double s = std::sin(kPi * u);
            return (2.0 * kPi / period) * s * s;
        }
        case PulseShape::Bump:
            return (kPi / period) * u * (1.0 - u) * (1.0 + 0.5 * u) / kBumpArea;
    }
    return 0.0;
}

double Pulse::phase(double t) const {
    const double cycles = std::floor(t / period);
    const double u = t / period - cycles;
    double frac = 0.0;
    switch (shape) {
        case PulseShape::Constant:
            frac = kPi * u;
            break;
        case PulseShape::SinSquared:
            frac = kPi * u - 0.5 * std::sin(2.0 * kPi * u);
            break;
        case PulseShape::Bump: {
            // integral of u(1-u)(1+u/2) = u^2/2 - u^3/6 - u^4/8
            const double w = 0.5 * u * u - u * u * u / 6.0 - u * u * u * u / 8.0;
            frac = kPi * w / kBumpArea;
            break;
        }
    }
    return kPi * cycles + frac;
}

double Pulse::simpson_area(int panels) const {
    const double h = period / (2 * panels);
    double sum = omega(0.0) + omega(period);
    for (int i = 1; i < 2 * panels; ++i) sum += omega(i * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

ThreeLevelParams ThreeLevelParams::from_gate_angles(double theta, double vartheta, Pulse pulse) {
    ThreeLevelParams p;
    p.omega0 = std::exp(Complex(0.0, vartheta)) * std::sin(0.5 * theta);
    p.omega1 = -std::cos(0.5 * theta);
    p.pulse = pulse;
    return p;
}

void ThreeLevelParams::validate() const {
    const double norm = std::norm(omega0) + std::norm(omega1);
    if (std::abs(norm - 1.0) > 1e-12)
        throw Error("ThreeLevelParams: |omega0|^2 + |omega1|^2 = " + std::to_string(norm));
    const double area = pulse.simpson_area();
    if (std::abs(area - kPi) > 1e-10)
        throw Error("ThreeLevelParams: pulse area " + std::to_string(area) + " != pi");
}

Vector ThreeLevelParams::bright_state() const {
    Vector b = Vector::Zero(3);
    b(0) = std::conj(omega0);
    b(1) = std::conj(omega1);
    return b;
}

Vector ThreeLevelParams::dark_state() const {
    Vector d = Vector::Zero(3);
    d(0) = -omega1;
    d(1) = omega0;
    return d;
}

Matrix ThreeLevelParams::initial_basis() const {
    Matrix b = Matrix::Zero(3, 3);
    const Complex eip = std::exp(Complex(0.0, varphi));
    b(0, 0) = std::cos(0.5 * phi);
    b(1, 0) = eip * std::sin(0.5 * phi);
    b(0, 1) = -std::conj(eip) * std::sin(0.5 * phi);
    b(1, 1) = std::cos(0.5 * phi);
    b(2, 2) = 1.0;
    return b;
}

DrivenHamiltonian build_hamiltonian(const ThreeLevelParams& p) {
    p.validate();
    Vector b = p.bright_state();
    Vector two = Vector::Zero(3);
    two(2) = 1.0;
    const Matrix coupling = two * b.adjoint() + b * two.adjoint();
    const Pulse pulse = p.pulse;
    DrivenHamiltonian h;
    h.period = pulse.period;
    h.label = "three-level[" + pulse_shape_name(pulse.shape) + "]";
    h.eval = [pulse, coupling](double t) { return Matrix(pulse.omega(t) * coupling); };
    return h;
}

Matrix closed_form_propagator(const ThreeLevelParams& p, double t) {
    const Vector b = p.bright_state();
    const Vector d = p.dark_state();
    Vector two = Vector::Zero(3);
    two(2) = 1.0;
    const double ph = p.pulse.phase(t);
    const Matrix pd = d * d.adjoint();
    const Matrix pb2 = b * b.adjoint() + two * two.adjoint();
    const Matrix m = two * b.adjoint() + b * two.adjoint();
    return pd + std::cos(ph) * pb2 - Complex(0.0, 1.0) * std::sin(ph) * m;
}

Matrix closed_form_g1(double theta, double vartheta) {
    Matrix g(2, 2);
    g(0, 0) = std::cos(theta);
    g(0, 1) = std::exp(Complex(0.0, -vartheta)) * std::sin(theta);
    g(1, 0) = std::exp(Complex(0.0, vartheta)) * std::sin(theta);
    g(1, 1) = -std::cos(theta);
    return g;
}

Complex closed_form_g2() { return Complex(-1.0, 0.0); }

Observable default_observable(double lambda1, double lambda2) {
    Matrix x = Matrix::Zero(3, 3);
    x(0, 0) = lambda1;
    x(1, 1) = lambda1;
    x(2, 2) = lambda2;
    return Observable(std::move(x));
}

} // namespace nogp
