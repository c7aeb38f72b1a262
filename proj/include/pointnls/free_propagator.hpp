#ifndef POINTNLS_FREE_PROPAGATOR_HPP
#define POINTNLS_FREE_PROPAGATOR_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/wavefunction.hpp"

namespace pointnls {

// Free flow of i d/dt u = -u'' : mode e^{ikx} picks up the phase e^{-i k^2 t}.

/// Exact free evolution on the periodic grid; unitary for any dt.
inline WaveFunction free_step(const WaveFunction& psi, double dt) {
    const int m_count = psi.grid.num_points();
    std::vector<cplx> hat = dft(psi);
    for (int m = 0; m < m_count; ++m) {
        const double k = psi.grid.wavenumber(m);
        hat[static_cast<std::size_t>(m)] *= std::polar(1.0, -k * k * dt);
    }
    cached_fft(m_count).backward(hat);
    const double scale = 1.0 / static_cast<double>(m_count);
    for (cplx& v : hat) v *= scale;
    return WaveFunction(psi.grid, std::move(hat));
}

/// Integral kernel of the free group on the line:
/// U(t, x) = e^{i x^2 / (4t)} / sqrt(4 pi i t), principal square root.
inline cplx free_kernel(double t, double x) {
    if (t == 0.0) throw ValidationError("free_kernel: singular at t = 0");
    const cplx root = std::sqrt(cplx(0.0, 4.0 * M_PI * t));
    return std::polar(1.0, x * x / (4.0 * t)) / root;
}

/// Evaluates (U(t) phi)(0) for many t from one spectrum of phi.
class FreeOriginEvaluator {
public:
    explicit FreeOriginEvaluator(const WaveFunction& phi)
        : grid_(phi.grid), terms_(phi.values.size()) {
        const int m_count = grid_.num_points();
        std::vector<cplx> hat = dft(phi);
        // Inverse DFT evaluated at the origin node j = M/2 contributes the
        // alternating phase e^{2 pi i m (M/2) / M} = (-1)^m.
        const double scale = 1.0 / static_cast<double>(m_count);
        for (int m = 0; m < m_count; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            terms_[static_cast<std::size_t>(m)] = hat[static_cast<std::size_t>(m)] * sign * scale;
            k_sq_.push_back(grid_.wavenumber(m) * grid_.wavenumber(m));
        }
    }

    cplx at(double t) const {
        cplx acc(0.0, 0.0);
        for (std::size_t m = 0; m < terms_.size(); ++m)
            acc += terms_[m] * std::polar(1.0, -k_sq_[m] * t);
        return acc;
    }

    const Grid1D& grid() const { return grid_; }

private:
    Grid1D grid_;
    std::vector<cplx> terms_;
    std::vector<double> k_sq_;
};

}  // namespace pointnls

#endif
