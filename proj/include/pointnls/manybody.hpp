#ifndef POINTNLS_MANYBODY_HPP
#define POINTNLS_MANYBODY_HPP

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/fft.hpp"
#include "pointnls/hartree.hpp"
#include "pointnls/potentials.hpp"
#include "pointnls/wavefunction.hpp"

namespace pointnls {

// Exact small-N bosonic dynamics for
//   H_N = -sum_j d^2/dx_j^2 + (mu/N) sum_{k<l} w_eps(x_k) w_eps(x_l)
// on the tensor grid [-L, L)^N, plus one-particle reduced densities and
// trace-norm distances. Tensors are stored row-major with x_1 slowest.

inline constexpr std::size_t kMaxTensorEntries = std::size_t(1) << 27;

inline std::size_t tensor_entries(int num_points, int n_particles) {
    std::size_t total = 1;
    for (int c = 0; c < n_particles; ++c) {
        if (total > kMaxTensorEntries / static_cast<std::size_t>(num_points) + 1)
            return kMaxTensorEntries + 1;
        total *= static_cast<std::size_t>(num_points);
    }
    return total;
}

inline void require_tensor_budget(int num_points, int n_particles) {
    if (n_particles < 2 || n_particles > 4)
        throw ValidationError("many-body states support N in 2..4, got N=" +
                              std::to_string(n_particles));
    if (tensor_entries(num_points, n_particles) > kMaxTensorEntries)
        throw GuardError("memory budget: M^N exceeds 2^27 entries (M=" +
                         std::to_string(num_points) + ", N=" + std::to_string(n_particles) + ")");
}

struct ManyBodyState {
    int n_particles;
    Grid1D grid;
    std::vector<cplx> amplitudes;  // row-major, size M^N

    ManyBodyState(int n, Grid1D g) : n_particles(n), grid(g) {
        require_tensor_budget(g.num_points(), n);
        amplitudes.assign(tensor_entries(g.num_points(), n), cplx(0.0, 0.0));
    }
};

inline double l2_norm(const ManyBodyState& psi) {
    double acc = 0.0;
    for (const cplx& v : psi.amplitudes) acc += std::norm(v);
    return std::sqrt(acc * std::pow(psi.grid.spacing(), psi.n_particles));
}

namespace detail {

// Multiplies each tensor entry by scale * prod_c factor[digit_c], walking the
// first N-1 coordinates with an odometer and the last one contiguously.
inline void apply_separable(std::vector<cplx>& a, int n_axes, int extent,
                            const std::vector<cplx>& factor, cplx scale) {
    const std::size_t block = static_cast<std::size_t>(extent);
    const std::size_t outer = a.size() / block;
    std::vector<int> digits(static_cast<std::size_t>(n_axes - 1), 0);
    for (std::size_t o = 0; o < outer; ++o) {
        cplx prefix = scale;
        for (int d : digits) prefix *= factor[static_cast<std::size_t>(d)];
        cplx* row = a.data() + o * block;
        for (int i = 0; i < extent; ++i) row[i] *= prefix * factor[static_cast<std::size_t>(i)];
        for (int c = static_cast<int>(digits.size()) - 1; c >= 0; --c) {
            if (++digits[static_cast<std::size_t>(c)] < extent) break;
            digits[static_cast<std::size_t>(c)] = 0;
        }
    }
}

}  // namespace detail

/// phi^{(x) N}: entries prod_c phi(x_{i_c}); symmetric by construction.
inline ManyBodyState build_factorized(const WaveFunction& phi, int n_particles) {
    if (std::abs(l2_norm(phi) - 1.0) > 1e-8)
        throw ValidationError("build_factorized: phi must be normalized (|1 - ||phi||| <= 1e-8)");
    ManyBodyState psi(n_particles, phi.grid);
    const int m_count = phi.grid.num_points();
    const std::size_t block = static_cast<std::size_t>(m_count);
    const std::size_t outer = psi.amplitudes.size() / block;
    std::vector<int> digits(static_cast<std::size_t>(n_particles - 1), 0);
    for (std::size_t o = 0; o < outer; ++o) {
        cplx prefix(1.0, 0.0);
        for (int d : digits) prefix *= phi.values[static_cast<std::size_t>(d)];
        cplx* row = psi.amplitudes.data() + o * block;
        for (int i = 0; i < m_count; ++i) row[i] = prefix * phi.values[static_cast<std::size_t>(i)];
        for (int c = static_cast<int>(digits.size()) - 1; c >= 0; --c) {
            if (++digits[static_cast<std::size_t>(c)] < m_count) break;
            digits[static_cast<std::size_t>(c)] = 0;
        }
    }
    return psi;
}

/// Normalized symmetrization of phi^{(x)(N-1)} v phi_perp: one particle is
/// promoted out of the condensate.
inline ManyBodyState build_defect_state(const WaveFunction& phi, const WaveFunction& perp,
                                        int n_particles) {
    require_same_grid(phi, perp);
    if (std::abs(l2_norm(phi) - 1.0) > 1e-8 || std::abs(l2_norm(perp) - 1.0) > 1e-8)
        throw ValidationError("build_defect_state: inputs must be normalized");
    if (std::abs(inner(phi, perp)) > 1e-8)
        throw ValidationError("build_defect_state: inputs must be orthogonal (|<phi, perp>| <= 1e-8)");

    ManyBodyState psi(n_particles, phi.grid);
    const int m_count = phi.grid.num_points();
    const std::size_t total = psi.amplitudes.size();
    std::vector<int> digits(static_cast<std::size_t>(n_particles), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        cplx acc(0.0, 0.0);
        for (int slot = 0; slot < n_particles; ++slot) {
            cplx term(1.0, 0.0);
            for (int c = 0; c < n_particles; ++c) {
                const auto idx = static_cast<std::size_t>(digits[static_cast<std::size_t>(c)]);
                term *= (c == slot) ? perp.values[idx] : phi.values[idx];
            }
            acc += term;
        }
        psi.amplitudes[flat] = acc;
        for (int c = n_particles - 1; c >= 0; --c) {
            if (++digits[static_cast<std::size_t>(c)] < m_count) break;
            digits[static_cast<std::size_t>(c)] = 0;
        }
    }
    const double norm = l2_norm(psi);
    for (cplx& v : psi.amplitudes) v /= norm;
    return psi;
}

/// Diagonal interaction tensor V(X) = (mu/N) sum_{k<l} w_eps(x_k) w_eps(x_l),
/// computed through sum_{k<l} a_k a_l = (S_1^2 - S_2)/2.
inline std::vector<double> manybody_potential(const ScaledBump& b, double mu, int n_particles,
                                              const Grid1D& grid) {
    require_resolved(b, grid);
    require_tensor_budget(grid.num_points(), n_particles);
    const std::vector<double> a = sample_bump(b, grid);
    const int m_count = grid.num_points();
    std::vector<double> v(tensor_entries(m_count, n_particles));
    const double scale = 0.5 * mu / static_cast<double>(n_particles);

    const std::size_t block = static_cast<std::size_t>(m_count);
    const std::size_t outer = v.size() / block;
    std::vector<int> digits(static_cast<std::size_t>(n_particles - 1), 0);
    for (std::size_t o = 0; o < outer; ++o) {
        double s1 = 0.0, s2 = 0.0;
        for (int d : digits) {
            const double ad = a[static_cast<std::size_t>(d)];
            s1 += ad;
            s2 += ad * ad;
        }
        double* row = v.data() + o * block;
        for (int i = 0; i < m_count; ++i) {
            const double ai = a[static_cast<std::size_t>(i)];
            const double t1 = s1 + ai;
            const double t2 = s2 + ai * ai;
            row[i] = scale * (t1 * t1 - t2);
        }
        for (int c = static_cast<int>(digits.size()) - 1; c >= 0; --c) {
            if (++digits[static_cast<std::size_t>(c)] < m_count) break;
            digits[static_cast<std::size_t>(c)] = 0;
        }
    }
    return v;
}

/// Strang split-step propagation of the N-body state: exact spectral kinetic
/// flow and exact diagonal potential phase; unitary and symmetry-preserving.
inline ManyBodyState evolve_manybody(ManyBodyState psi, const ScaledBump& b, double mu,
                                     double dt, double horizon) {
    if (!(dt > 0.0)) throw ValidationError("evolve_manybody: dt must be positive");
    if (!(horizon >= 0.0)) throw ValidationError("evolve_manybody: T must be nonnegative");
    require_resolved(b, psi.grid);
    require_step_resolved(b, psi.grid, dt);

    const long steps = std::lround(horizon / dt);
    if (steps == 0) return psi;

    const int m_count = psi.grid.num_points();
    const int n_axes = psi.n_particles;
    const std::size_t total = psi.amplitudes.size();

    const std::vector<double> v = manybody_potential(b, mu, n_axes, psi.grid);

    // Potential phase for the full step; cached as a complex array when it
    // fits comfortably, recomputed on the fly otherwise.
    const bool cache_phase = total <= (std::size_t(1) << 24);
    std::vector<cplx> phase;
    if (cache_phase) {
        phase.resize(total);
        for (std::size_t i = 0; i < total; ++i) phase[i] = std::polar(1.0, -v[i] * dt);
    }

    std::vector<cplx> kin_half(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
        const double k = psi.grid.wavenumber(m);
        kin_half[static_cast<std::size_t>(m)] = std::polar(1.0, -k * k * 0.5 * dt);
    }

    FftND fft(n_axes, m_count, psi.amplitudes.data());
    const cplx inv_total(1.0 / static_cast<double>(total), 0.0);

    auto kinetic_half = [&]() {
        fft.forward(psi.amplitudes.data());
        detail::apply_separable(psi.amplitudes, n_axes, m_count, kin_half, inv_total);
        fft.backward(psi.amplitudes.data());
    };

    for (long s = 0; s < steps; ++s) {
        kinetic_half();
        if (cache_phase)
            for (std::size_t i = 0; i < total; ++i) psi.amplitudes[i] *= phase[i];
        else
            for (std::size_t i = 0; i < total; ++i) psi.amplitudes[i] *= std::polar(1.0, -v[i] * dt);
        kinetic_half();
    }

    for (const cplx& a : psi.amplitudes)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw NumericError("evolve_manybody: non-finite amplitudes after evolution");
    return psi;
}

/// Largest deviation |Psi(..i..j..) - Psi(..j..i..)| over a deterministic
/// sample of transpositions.
inline double symmetry_residual(const ManyBodyState& psi, int samples = 64) {
    const int m_count = psi.grid.num_points();
    const int n = psi.n_particles;
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> node(0, m_count - 1);
    std::uniform_int_distribution<int> axis(0, n - 1);
    std::vector<int> digits(static_cast<std::size_t>(n));
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        for (int c = 0; c < n; ++c) digits[static_cast<std::size_t>(c)] = node(rng);
        int a = axis(rng), b2 = axis(rng);
        if (a == b2) b2 = (a + 1) % n;
        auto flatten = [&](const std::vector<int>& d) {
            std::size_t flat = 0;
            for (int c = 0; c < n; ++c)
                flat = flat * static_cast<std::size_t>(m_count) +
                       static_cast<std::size_t>(d[static_cast<std::size_t>(c)]);
            return flat;
        };
        const std::size_t orig = flatten(digits);
        std::swap(digits[static_cast<std::size_t>(a)], digits[static_cast<std::size_t>(b2)]);
        const std::size_t swapped = flatten(digits);
        worst = std::max(worst, std::abs(psi.amplitudes[orig] - psi.amplitudes[swapped]));
    }
    return worst;
}

/// One-particle reduced density: Hermitian M x M kernel matrix with unit trace
/// under the quadrature h * sum_i gamma(x_i, x_i).
struct ReducedDensity {
    Grid1D grid;
    Eigen::MatrixXcd kernel;  // gamma(x_i, x_j)
};

inline ReducedDensity reduced_density(const ManyBodyState& psi) {
    const int m_count = psi.grid.num_points();
    const auto rest = static_cast<Eigen::Index>(psi.amplitudes.size() / static_cast<std::size_t>(m_count));
    using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> unfolded(psi.amplitudes.data(), m_count, rest);
    const double weight = std::pow(psi.grid.spacing(), psi.n_particles - 1);
    ReducedDensity rd{psi.grid, Eigen::MatrixXcd(m_count, m_count)};
    rd.kernel.noalias() = weight * (unfolded * unfolded.adjoint());
    return rd;
}

/// Reduced density of the defect state in the two-dimensional span
/// {phi, perp}: ((N-1)/N) |phi><phi| + (1/N) |perp><perp|. Valid for any
/// N >= 2, with no tensor storage.
inline ReducedDensity defect_reduced_density(const WaveFunction& phi, const WaveFunction& perp,
                                             int n_particles) {
    require_same_grid(phi, perp);
    if (n_particles < 2) throw ValidationError("defect_reduced_density: need N >= 2");
    if (std::abs(inner(phi, perp)) > 1e-8)
        throw ValidationError("defect_reduced_density: inputs must be orthogonal");
    const int m_count = phi.grid.num_points();
    Eigen::Map<const Eigen::VectorXcd> f(phi.values.data(), m_count);
    Eigen::Map<const Eigen::VectorXcd> p(perp.values.data(), m_count);
    const double nn = static_cast<double>(n_particles);
    ReducedDensity rd{phi.grid, Eigen::MatrixXcd(m_count, m_count)};
    rd.kernel.noalias() = ((nn - 1.0) / nn) * (f * f.adjoint()) + (1.0 / nn) * (p * p.adjoint());
    return rd;
}

inline double density_trace(const ReducedDensity& rd) {
    return rd.grid.spacing() * rd.kernel.trace().real();
}

/// Occupation spectrum: eigenvalues of the quadrature-weighted matrix
/// h * gamma, sorted descending. The single factor h is what makes discrete
/// eigenvalues approximate the continuum operator's.
inline Eigen::VectorXd density_eigenvalues(const ReducedDensity& rd) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rd.grid.spacing() * rd.kernel);
    if (solver.info() != Eigen::Success)
        throw NumericError("density_eigenvalues: eigensolver failed");
    Eigen::VectorXd ev = solver.eigenvalues();
    return ev.reverse();
}

/// Tr | gamma - |psi><psi| | via full Hermitian eigendecomposition of the
/// quadrature-weighted difference.
inline double trace_distance(const ReducedDensity& gamma, const WaveFunction& psi) {
    if (gamma.grid != psi.grid) throw ValidationError("trace_distance: grid mismatch");
    if (std::abs(l2_norm(psi) - 1.0) > 1e-8)
        throw ValidationError("trace_distance: psi must be normalized");
    const int m_count = psi.grid.num_points();
    Eigen::Map<const Eigen::VectorXcd> v(psi.values.data(), m_count);
    Eigen::MatrixXcd diff = gamma.kernel - (v * v.adjoint());
    diff *= psi.grid.spacing();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff);
    if (solver.info() != Eigen::Success) throw NumericError("trace_distance: eigensolver failed");
    return solver.eigenvalues().cwiseAbs().sum();
}

/// Tr | |f><f| - |g><g| | = 2 sqrt(1 - |<f, g>|^2) for normalized f, g.
inline double pure_trace_distance(const WaveFunction& f, const WaveFunction& g) {
    const double overlap_sq = std::norm(inner(f, g));
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap_sq));
}

/// Per-particle energy of phi^{(x) N} in closed form:
/// (1/2)||phi'||^2 + (mu/4)((N-1)/N) <w_eps, |phi|^2>^2.
inline double factorized_energy_per_particle(const WaveFunction& phi, const ScaledBump& b,
                                             double mu, int n_particles) {
    const double c = coupling(b, phi);
    const double nn = static_cast<double>(n_particles);
    return 0.5 * derivative_norm_sq(phi) + 0.25 * mu * ((nn - 1.0) / nn) * c * c;
}

}  // namespace pointnls

#endif
