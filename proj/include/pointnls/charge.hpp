#ifndef POINTNLS_CHARGE_HPP
#define POINTNLS_CHARGE_HPP

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/free_propagator.hpp"
#include "pointnls/wavefunction.hpp"

namespace pointnls {

// NLS with cubic nonlinearity concentrated at the origin, solved through the
// charge q(t) = phi_t(0). Evaluating the Duhamel form at x = 0 gives the
// Abel-kernel Volterra equation
//
//   q(t) = (U(t) phi)(0) - i mu / sqrt(4 pi i) * int_0^t (t-s)^{-1/2} |q(s)|^2 q(s) ds.
//
// The singular weight is integrated exactly against a piecewise-linear
// interpolant of the density g = |q|^2 q (product integration); the terminal
// subinterval couples implicitly to q_n and is resolved by a damped fixed
// point.

/// Exact moments of the Abel kernel (t_n - s)^{-1/2} over mesh subintervals.
/// All formulas are written cancellation-free in d = n - j.
class AbelWeights {
public:
    explicit AbelWeights(double delta) : delta_(delta) {
        if (!(delta > 0.0)) throw ValidationError("AbelWeights: step must be positive");
        sqrt_delta_ = std::sqrt(delta);
    }

    double delta() const { return delta_; }

    /// omega_{n,j} = int_{t_j}^{t_{j+1}} (t_n - s)^{-1/2} ds, telescoping to
    /// 2 sqrt(t_n).
    double interval_weight(long n, long j) const {
        if (j < 0 || j >= n) throw ValidationError("AbelWeights: need 0 <= j < n");
        return moment0(n - j);
    }

    /// Coefficient of g_j when the linear interpolant on [t_j, t_{j+1}] is
    /// integrated against the kernel at node n (d = n - j). In tau = t_n - s
    /// the hat of g_j is (tau - a)/delta.
    double older_coeff(long d) const { return moment1(d) / delta_; }

    /// Coefficient of g_{j+1}; d = 1 gives the implicit endpoint weight
    /// (4/3) sqrt(delta).
    double newer_coeff(long d) const { return moment0(d) - moment1(d) / delta_; }

private:
    // int_a^b tau^{-1/2} d tau with a = (d-1) delta, b = d delta.
    double moment0(long d) const {
        const double u = std::sqrt(static_cast<double>(d));
        const double v = std::sqrt(static_cast<double>(d - 1));
        return 2.0 * sqrt_delta_ / (u + v);
    }

    // int_a^b tau^{-1/2} (tau - a) d tau with a = (d-1) delta, b = d delta,
    // i.e. (2/3)(b^{3/2} - a^{3/2}) - a * moment0; the cube difference is
    // written via u = sqrt(d), v = sqrt(d-1) to stay cancellation-free.
    double moment1(long d) const {
        const double u = std::sqrt(static_cast<double>(d));
        const double v = std::sqrt(static_cast<double>(d - 1));
        const double dd = static_cast<double>(d);
        const double q = (2.0 / 3.0) * delta_ * sqrt_delta_ *
                         (dd + u * v + (dd - 1.0)) / (u + v);
        return q - (dd - 1.0) * delta_ * moment0(d);
    }

    double delta_;
    double sqrt_delta_;
};

struct ChargeTrajectory {
    double delta;                // mesh step
    double mu;                   // nonlinearity strength
    std::vector<double> times;   // t_n = n delta
    std::vector<cplx> q;         // charges q_n
    std::vector<cplx> source;    // f_n = (U(t_n) phi)(0)

    long node_of(double t) const {
        const double pos = t / delta;
        const long n = std::lround(pos);
        if (n < 0 || n >= static_cast<long>(times.size()) ||
            std::abs(t - static_cast<double>(n) * delta) > 1e-9 * std::max(1.0, std::abs(t)))
            throw ValidationError("time t=" + std::to_string(t) +
                                  " is not a node of the charge mesh (delta=" +
                                  std::to_string(delta) + ")");
        return n;
    }
};

inline cplx free_at_origin(const WaveFunction& phi, double t) {
    return FreeOriginEvaluator(phi).at(t);
}

inline ChargeTrajectory solve_charge(const WaveFunction& phi, double mu, double delta,
                                     long n_max) {
    if (!(delta > 0.0)) throw ValidationError("solve_charge: Delta must be positive");
    if (n_max < 0) throw ValidationError("solve_charge: n_max must be nonnegative");

    ChargeTrajectory traj;
    traj.delta = delta;
    traj.mu = mu;
    traj.times.resize(static_cast<std::size_t>(n_max) + 1);
    traj.q.resize(traj.times.size());
    traj.source.resize(traj.times.size());

    const FreeOriginEvaluator origin(phi);
    for (long n = 0; n <= n_max; ++n) {
        traj.times[static_cast<std::size_t>(n)] = static_cast<double>(n) * delta;
        traj.source[static_cast<std::size_t>(n)] = origin.at(traj.times[static_cast<std::size_t>(n)]);
    }

    traj.q[0] = traj.source[0];  // q_0 = phi(0)
    if (n_max == 0 || mu == 0.0) {
        if (mu == 0.0) traj.q = traj.source;
        return traj;
    }

    const cplx prefactor = cplx(0.0, -1.0) * mu / std::sqrt(cplx(0.0, 4.0 * M_PI));

    const AbelWeights weights(delta);
    std::vector<double> older(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> newer(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (long d = 1; d <= n_max; ++d) {
        older[static_cast<std::size_t>(d)] = weights.older_coeff(d);
        newer[static_cast<std::size_t>(d)] = weights.newer_coeff(d);
    }
    const double implicit_w = newer[1];

    std::vector<cplx> g(traj.q.size());
    g[0] = std::norm(traj.q[0]) * traj.q[0];

    constexpr int kMaxIters = 50;
    constexpr double kTol = 1e-12;
    constexpr double kDamping = 0.5;

    for (long n = 1; n <= n_max; ++n) {
        cplx known(0.0, 0.0);
        for (long m = 0; m < n; ++m) {
            double coeff = older[static_cast<std::size_t>(n - m)];
            if (m >= 1) coeff += newer[static_cast<std::size_t>(n - m + 1)];
            known += coeff * g[static_cast<std::size_t>(m)];
        }
        const cplx rhs = traj.source[static_cast<std::size_t>(n)] + prefactor * known;

        // Damped fixed point for q = rhs + prefactor * w * |q|^2 q. The
        // correction carries the small factor sqrt(delta), so the map is
        // strongly contractive for reasonable meshes.
        cplx qn = traj.q[static_cast<std::size_t>(n - 1)];
        bool converged = false;
        for (int it = 0; it < kMaxIters; ++it) {
            const cplx next = rhs + prefactor * implicit_w * (std::norm(qn) * qn);
            const double residual = std::abs(next - qn);
            qn = qn + kDamping * (next - qn);
            if (!std::isfinite(qn.real()) || !std::isfinite(qn.imag())) break;
            if (residual <= kTol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericError("solve_charge: node iteration did not converge at t=" +
                               std::to_string(static_cast<double>(n) * delta) +
                               " (Delta=" + std::to_string(delta) + " too large)");
        traj.q[static_cast<std::size_t>(n)] = qn;
        g[static_cast<std::size_t>(n)] = std::norm(qn) * qn;
    }
    return traj;
}

namespace detail {

// int_0^1 e^{i theta v} dv and int_0^1 v e^{i theta v} dv. The closed forms
// cancel like theta^2 near zero; the series takes over below the crossover
// where both branches are accurate to ~5e-12.
inline cplx filon_e1(double theta) {
    if (std::abs(theta) < 5e-3)
        return cplx(1.0 - theta * theta / 6.0, theta / 2.0 - theta * theta * theta / 24.0);
    return (std::polar(1.0, theta) - cplx(1.0, 0.0)) / cplx(0.0, theta);
}

inline cplx filon_e2(double theta) {
    if (std::abs(theta) < 5e-3)
        return cplx(0.5 - theta * theta / 8.0, theta / 3.0 - theta * theta * theta / 30.0);
    const cplx it(0.0, theta);
    return (std::polar(1.0, theta) * (it - cplx(1.0, 0.0)) + cplx(1.0, 0.0)) / (it * it);
}

}  // namespace detail

/// Duhamel reconstruction on the grid:
///   phi_t(x) = (U(t) phi)(x) - i mu int_0^t U(t-s, x) |q(s)|^2 q(s) ds.
/// The substitution tau = sqrt(t-s) removes the kernel amplitude singularity:
/// -i mu U(tau^2, x) 2 tau = mu e^{-3 pi i/4} pi^{-1/2} e^{i x^2/(4 tau^2)}.
/// What remains is a unimodular oscillation integrated on the tau mesh (node
/// count matched to the charge mesh) by composite product quadrature of Filon
/// type: per subinterval the phase is linearized from its endpoint values and
/// e^{i phase} (linear density) is integrated exactly, which reduces to the
/// plain trapezoid where the phase is slow and stays bounded where it is not.
/// The first subinterval is dropped for x != 0: the phase x^2/(4 tau^2) has no
/// stationary point and its derivative diverges, so the true contribution is
/// O(dtau^3 / x^2).
inline WaveFunction reconstruct(const WaveFunction& phi, const ChargeTrajectory& traj, double t) {
    const long n = traj.node_of(t);
    WaveFunction out = free_step(phi, t);
    if (n == 0 || traj.mu == 0.0) return out;

    std::vector<cplx> g(traj.q.size());
    for (std::size_t m = 0; m < g.size(); ++m) g[m] = std::norm(traj.q[m]) * traj.q[m];

    auto density_at = [&](double s) -> cplx {
        double pos = s / traj.delta;
        if (pos <= 0.0) return g[0];
        if (pos >= static_cast<double>(n)) return g[static_cast<std::size_t>(n)];
        const long j = static_cast<long>(pos);
        const double frac = pos - static_cast<double>(j);
        return (1.0 - frac) * g[static_cast<std::size_t>(j)] +
               frac * g[static_cast<std::size_t>(j + 1)];
    };

    const long n_tau = std::max<long>(n, 16);
    const double dtau = std::sqrt(t) / static_cast<double>(n_tau);

    // Density samples and inverse phases in the tau variable, shared across
    // grid nodes.
    std::vector<cplx> gv(static_cast<std::size_t>(n_tau) + 1);
    std::vector<double> quarter_inv_tau_sq(static_cast<std::size_t>(n_tau) + 1, 0.0);
    for (long i = 0; i <= n_tau; ++i) {
        const double tau = static_cast<double>(i) * dtau;
        gv[static_cast<std::size_t>(i)] = density_at(t - tau * tau);
        if (i > 0) quarter_inv_tau_sq[static_cast<std::size_t>(i)] = 1.0 / (4.0 * tau * tau);
    }

    const cplx prefactor = cplx(0.0, -1.0) * traj.mu * std::polar(1.0, -M_PI / 4.0) /
                           std::sqrt(M_PI);

    const Grid1D& grid = phi.grid;
    const int m_count = grid.num_points();
    const int origin = grid.origin_index();

    // The kernel is even in x; nodes j and M-j share the correction.
    for (int j = 0; j <= m_count / 2; ++j) {
        const double x = grid.node(j);
        const double x_sq = x * x;
        cplx acc(0.0, 0.0);
        if (j == origin) {
            // Zero phase: plain trapezoid including [0, tau_1].
            acc = 0.5 * (gv[0] + gv[static_cast<std::size_t>(n_tau)]);
            for (long i = 1; i < n_tau; ++i) acc += gv[static_cast<std::size_t>(i)];
            acc *= dtau;
        } else {
            for (long i = 1; i < n_tau; ++i) {
                const double ph0 = x_sq * quarter_inv_tau_sq[static_cast<std::size_t>(i)];
                const double ph1 = x_sq * quarter_inv_tau_sq[static_cast<std::size_t>(i + 1)];
                const double theta = ph1 - ph0;
                const cplx e1 = detail::filon_e1(theta);
                const cplx e2 = detail::filon_e2(theta);
                acc += std::polar(1.0, ph0) * dtau *
                       (gv[static_cast<std::size_t>(i)] * (e1 - e2) +
                        gv[static_cast<std::size_t>(i + 1)] * e2);
            }
        }
        const cplx correction = prefactor * acc;
        out.values[static_cast<std::size_t>(j)] += correction;
        const int mirror = (m_count - j) % m_count;
        if (mirror != j) out.values[static_cast<std::size_t>(mirror)] += correction;
    }
    if (!all_finite(out)) throw NumericError("reconstruct: non-finite state at t=" + std::to_string(t));
    return out;
}

/// energy_delta of the reconstructed states; constant along the exact flow.
inline std::vector<double> delta_energy_series(const WaveFunction& phi,
                                               const ChargeTrajectory& traj,
                                               std::span<const double> sample_times) {
    std::vector<double> energies;
    energies.reserve(sample_times.size());
    for (double t : sample_times)
        energies.push_back(energy_delta(reconstruct(phi, traj, t), traj.mu));
    return energies;
}

}  // namespace pointnls

#endif
