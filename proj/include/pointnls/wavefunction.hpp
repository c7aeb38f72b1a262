#ifndef POINTNLS_WAVEFUNCTION_HPP
#define POINTNLS_WAVEFUNCTION_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/fft.hpp"
#include "pointnls/grid.hpp"

namespace pointnls {

/// One-body state: complex amplitudes sampled on a Grid1D.
struct WaveFunction {
    Grid1D grid;
    std::vector<cplx> values;

    WaveFunction(Grid1D g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != static_cast<std::size_t>(grid.num_points()))
            throw ValidationError("WaveFunction: value count does not match grid size");
    }

    explicit WaveFunction(Grid1D g)
        : grid(g), values(static_cast<std::size_t>(g.num_points()), cplx(0.0, 0.0)) {}

    cplx at_origin() const { return values[static_cast<std::size_t>(grid.origin_index())]; }
};

inline void require_same_grid(const WaveFunction& f, const WaveFunction& g) {
    if (f.grid != g.grid)
        throw ValidationError("grid mismatch: (L=" + std::to_string(f.grid.half_width()) +
                              ", M=" + std::to_string(f.grid.num_points()) + ") vs (L=" +
                              std::to_string(g.grid.half_width()) +
                              ", M=" + std::to_string(g.grid.num_points()) + ")");
}

/// h * sum_j conj(f_j) g_j; conjugate-linear in the first argument.
inline cplx inner(const WaveFunction& f, const WaveFunction& g) {
    require_same_grid(f, g);
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < f.values.size(); ++j) acc += std::conj(f.values[j]) * g.values[j];
    return f.grid.spacing() * acc;
}

inline double l2_norm_sq(const WaveFunction& psi) {
    double acc = 0.0;
    for (const cplx& v : psi.values) acc += std::norm(v);
    return psi.grid.spacing() * acc;
}

inline double l2_norm(const WaveFunction& psi) { return std::sqrt(l2_norm_sq(psi)); }

inline double sup_norm(const WaveFunction& psi) {
    double m = 0.0;
    for (const cplx& v : psi.values) m = std::max(m, std::abs(v));
    return m;
}

inline double sup_distance(const WaveFunction& f, const WaveFunction& g) {
    require_same_grid(f, g);
    double m = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j)
        m = std::max(m, std::abs(f.values[j] - g.values[j]));
    return m;
}

inline double l2_distance(const WaveFunction& f, const WaveFunction& g) {
    require_same_grid(f, g);
    double acc = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) acc += std::norm(f.values[j] - g.values[j]);
    return std::sqrt(f.grid.spacing() * acc);
}

/// Unnormalized DFT coefficients of the samples (FFTW forward convention).
inline std::vector<cplx> dft(const WaveFunction& psi) {
    std::vector<cplx> hat = psi.values;
    cached_fft(psi.grid.num_points()).forward(hat);
    return hat;
}

/// ||psi'||^2 via Parseval: (h/M) sum_m k_m^2 |hat_m|^2.
inline double derivative_norm_sq(const WaveFunction& psi) {
    const int m_count = psi.grid.num_points();
    std::vector<cplx> hat = dft(psi);
    double acc = 0.0;
    for (int m = 0; m < m_count; ++m) {
        const double k = psi.grid.wavenumber(m);
        acc += k * k * std::norm(hat[static_cast<std::size_t>(m)]);
    }
    return psi.grid.spacing() / static_cast<double>(m_count) * acc;
}

/// Spectral derivative (Fourier multiplier ik).
inline WaveFunction spectral_derivative(const WaveFunction& psi) {
    const int m_count = psi.grid.num_points();
    std::vector<cplx> hat = dft(psi);
    for (int m = 0; m < m_count; ++m)
        hat[static_cast<std::size_t>(m)] *= cplx(0.0, psi.grid.wavenumber(m));
    cached_fft(m_count).backward(hat);
    const double scale = 1.0 / static_cast<double>(m_count);
    for (cplx& v : hat) v *= scale;
    return WaveFunction(psi.grid, std::move(hat));
}

inline double h1_norm(const WaveFunction& psi) {
    return std::sqrt(l2_norm_sq(psi) + derivative_norm_sq(psi));
}

/// Conserved functional of the point-nonlinearity flow:
/// (1/2)||phi'||^2 + (mu/4)|phi(0)|^4.
inline double energy_delta(const WaveFunction& phi, double mu) {
    const double q2 = std::norm(phi.at_origin());
    return 0.5 * derivative_norm_sq(phi) + 0.25 * mu * q2 * q2;
}

/// Normalized Gaussian packet (2 pi sigma^2)^{-1/4} exp(-x^2 / (4 sigma^2)).
inline WaveFunction gaussian_packet(const Grid1D& grid, double sigma) {
    if (!(sigma > 0.0))
        throw ValidationError("gaussian_packet: sigma must be positive, got " +
                              std::to_string(sigma));
    const double amp = std::pow(2.0 * M_PI * sigma * sigma, -0.25);
    WaveFunction psi(grid);
    for (int j = 0; j < grid.num_points(); ++j) {
        const double x = grid.node(j);
        psi.values[static_cast<std::size_t>(j)] = amp * std::exp(-x * x / (4.0 * sigma * sigma));
    }
    return psi;
}

/// First excited Hermite-type packet, orthogonal to the Gaussian of the same
/// width; normalized on the grid.
inline WaveFunction odd_packet(const Grid1D& grid, double sigma) {
    WaveFunction psi(grid);
    for (int j = 0; j < grid.num_points(); ++j) {
        const double x = grid.node(j);
        psi.values[static_cast<std::size_t>(j)] = x * std::exp(-x * x / (4.0 * sigma * sigma));
    }
    const double n = l2_norm(psi);
    for (cplx& v : psi.values) v /= n;
    return psi;
}

inline bool all_finite(const WaveFunction& psi) {
    for (const cplx& v : psi.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}  // namespace pointnls

#endif
