#ifndef POINTNLS_TESTS_ORACLES_HPP
#define POINTNLS_TESTS_ORACLES_HPP

// Brute-force reference computations kept out of the library on purpose: each
// one re-derives a quantity along a path independent of the implementation it
// checks.

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "pointnls/pointnls.hpp"

namespace pointnls::oracles {

/// One-body spectral kinetic operator as a dense matrix, column by column.
inline Eigen::MatrixXcd kinetic_matrix(const Grid1D& grid) {
    const int m_count = grid.num_points();
    Eigen::MatrixXcd t1(m_count, m_count);
    for (int col = 0; col < m_count; ++col) {
        WaveFunction e(grid);
        e.values[static_cast<std::size_t>(col)] = cplx(1.0, 0.0);
        std::vector<cplx> hat = dft(e);
        for (int m = 0; m < m_count; ++m) {
            const double k = grid.wavenumber(m);
            hat[static_cast<std::size_t>(m)] *= k * k;
        }
        cached_fft(m_count).backward(hat);
        for (int row = 0; row < m_count; ++row)
            t1(row, col) = hat[static_cast<std::size_t>(row)] / static_cast<double>(m_count);
    }
    return t1;
}

/// Dense two-body Hamiltonian H = T (x) I + I (x) T + diag(V) on the
/// row-major (x1 slowest) tensor basis.
inline Eigen::MatrixXcd dense_two_body_hamiltonian(const Grid1D& grid, const ScaledBump& bump,
                                                   double mu) {
    const int m_count = grid.num_points();
    const int dim = m_count * m_count;
    const Eigen::MatrixXcd t1 = kinetic_matrix(grid);
    const std::vector<double> v = manybody_potential(bump, mu, 2, grid);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i1 = 0; i1 < m_count; ++i1)
        for (int i2 = 0; i2 < m_count; ++i2) {
            const int row = i1 * m_count + i2;
            for (int j = 0; j < m_count; ++j) {
                h(row, j * m_count + i2) += t1(i1, j);
                h(row, i1 * m_count + j) += t1(i2, j);
            }
            h(row, row) += v[static_cast<std::size_t>(row)];
        }
    return h;
}

/// exp(-i H T) psi through a full Hermitian eigendecomposition.
inline ManyBodyState dense_exponential_evolve(const ManyBodyState& psi, const ScaledBump& bump,
                                              double mu, double horizon) {
    const int m_count = psi.grid.num_points();
    const int dim = m_count * m_count;
    const Eigen::MatrixXcd h = dense_two_body_hamiltonian(psi.grid, bump, mu);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd coeffs = solver.eigenvectors().adjoint() *
                              Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes.data(), dim);
    for (int i = 0; i < dim; ++i)
        coeffs(i) *= std::polar(1.0, -solver.eigenvalues()(i) * horizon);
    const Eigen::VectorXcd evolved = solver.eigenvectors() * coeffs;
    ManyBodyState out(psi.n_particles, psi.grid);
    for (int i = 0; i < dim; ++i) out.amplitudes[static_cast<std::size_t>(i)] = evolved(i);
    return out;
}

/// Per-particle energy by direct tensor contraction,
/// (1/N) [ (1/2)||grad Psi||^2 + (1/2) <Psi, V Psi> ] with
/// V = (mu/N) sum_{k<l} w_eps(x_k) w_eps(x_l).
inline double contracted_energy_per_particle(const ManyBodyState& psi, const ScaledBump& bump,
                                             double mu) {
    const int m_count = psi.grid.num_points();
    const int n = psi.n_particles;
    const std::size_t total = psi.amplitudes.size();
    const double cell = std::pow(psi.grid.spacing(), n);

    std::vector<cplx> hat = psi.amplitudes;
    FftND fft(n, m_count, hat.data());
    fft.forward(hat.data());

    std::vector<double> k_sq(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
        const double k = psi.grid.wavenumber(m);
        k_sq[static_cast<std::size_t>(m)] = k * k;
    }

    double grad_sq = 0.0;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double k2 = 0.0;
        for (int c = 0; c < n; ++c) k2 += k_sq[static_cast<std::size_t>(digits[static_cast<std::size_t>(c)])];
        grad_sq += k2 * std::norm(hat[flat]);
        for (int c = n - 1; c >= 0; --c) {
            if (++digits[static_cast<std::size_t>(c)] < m_count) break;
            digits[static_cast<std::size_t>(c)] = 0;
        }
    }
    grad_sq *= cell / static_cast<double>(total);

    const std::vector<double> v = manybody_potential(bump, mu, n, psi.grid);
    double pot = 0.0;
    for (std::size_t i = 0; i < total; ++i) pot += v[i] * std::norm(psi.amplitudes[i]);
    pot *= cell;

    return 0.5 * (grad_sq + pot) / static_cast<double>(n);
}

/// Regularized Fresnel convolution with Richardson extrapolation in the
/// damping parameter: int U(t, x-y) U(s, y-z) e^{-delta y^2} dy -> delta -> 0.
inline cplx free_kernel_convolution(double t, double s, double x, double z) {
    auto damped = [&](double delta) {
        const double radius = std::sqrt(37.0 / delta);
        const long n = 400000;
        const double dy = 2.0 * radius / static_cast<double>(n);
        cplx acc(0.0, 0.0);
        for (long i = 0; i <= n; ++i) {
            const double y = -radius + static_cast<double>(i) * dy;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * free_kernel(t, x - y) * free_kernel(s, y - z) * std::exp(-delta * y * y);
        }
        return acc * dy;
    };
    const cplx i0 = damped(0.02);
    const cplx i1 = damped(0.01);
    const cplx i2 = damped(0.005);
    return (8.0 * i2 - 6.0 * i1 + i0) / 3.0;
}

}  // namespace pointnls::oracles

#endif
