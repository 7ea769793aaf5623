#pragma once

#include <complex>
#include <Eigen/Dense>

namespace nogp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default tolerance for Hermiticity checks on inputs.
inline constexpr double kHermiticityTol = 1e-12;

// Largest entry magnitude, the norm used by most residual checks.
inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

inline bool all_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

inline double unitarity_residual(const Matrix& u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

} // namespace nogp
