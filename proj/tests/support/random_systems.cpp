#include "support/random_systems.hpp"

#include <numbers>
#include <numeric>

namespace nogp::testing {

Matrix random_hermitian(std::mt19937& rng, int dim, double scale) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) a(i, j) = Complex(gauss(rng), gauss(rng));
    return scale * 0.5 * (a + a.adjoint());
}

Matrix random_unitary(std::mt19937& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    // fix the phase of each column for determinism
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

namespace {

Matrix random_block_diagonal(std::mt19937& rng, const std::vector<int>& blocks, double scale) {
    const int d = std::accumulate(blocks.begin(), blocks.end(), 0);
    Matrix m = Matrix::Zero(d, d);
    int off = 0;
    for (int b : blocks) {
        m.block(off, off, b, b) = random_hermitian(rng, b, scale);
        off += b;
    }
    return m;
}

} // namespace

CyclicSystem random_cyclic_system(unsigned seed, const std::vector<int>& block_sizes,
                                  double period, double scale) {
    std::mt19937 rng(seed);
    const int d = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);

    // Propagator made cyclic by construction: U(t,0) = R(t) exp(-i K t)
    // with R(t) = exp(-i f(t) S0), f = sin^2(pi t / T). K is block-diagonal,
    // so U(T,0) = exp(-i K T) preserves every eigenspace of X0; S0 is a
    // generic Hermitian that carries the subspaces around a nontrivial
    // loop in between. The generator is H(t) = f'(t) S0 + R(t) K R(t)^dag,
    // with commuting end conditions H(0) = H(T) = K.
    const Matrix k = random_block_diagonal(rng, block_sizes, scale);
    const Matrix s0 = random_hermitian(rng, d, scale);

    DrivenHamiltonian h;
    h.period = period;
    h.label = "cyclic-system[" + std::to_string(seed) + "]";
    h.eval = [k, s0, period](double t) {
        const double u = std::numbers::pi * t / period;
        const double f = std::sin(u) * std::sin(u);
        const double fp = std::numbers::pi / period * std::sin(2.0 * u);
        const Matrix r = skew_exp(s0, f);
        return Matrix(fp * s0 + r * k * r.adjoint());
    };

    Matrix x = Matrix::Zero(d, d);
    int off = 0;
    for (size_t j = 0; j < block_sizes.size(); ++j) {
        for (int n = 0; n < block_sizes[j]; ++n) x(off + n, off + n) = static_cast<double>(j) + 1.0;
        off += block_sizes[j];
    }
    return {std::move(h), Observable(std::move(x)), block_sizes};
}

} // namespace nogp::testing
