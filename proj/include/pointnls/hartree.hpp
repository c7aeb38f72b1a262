#ifndef POINTNLS_HARTREE_HPP
#define POINTNLS_HARTREE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/free_propagator.hpp"
#include "pointnls/potentials.hpp"
#include "pointnls/wavefunction.hpp"

namespace pointnls {

// Concentrated Hartree equation i d/dt u = -u'' + mu w_eps <w_eps, |u|^2> u,
// integrated by Strang splitting. The nonlinear substep is exact: the phase
// exp(-i mu c w_eps(x) tau) leaves |u| pointwise invariant, so the coupling
// c = <w_eps, |u|^2> is constant along the substep.

inline WaveFunction nonlinear_substep(const WaveFunction& u, const ScaledBump& b, double mu,
                                      double tau) {
    const double c = coupling(b, u);  // carries the resolution guard
    WaveFunction out = u;
    for (int j = 0; j < u.grid.num_points(); ++j) {
        const double phase = -mu * c * eval_w_eps(b, u.grid.node(j)) * tau;
        out.values[static_cast<std::size_t>(j)] *= std::polar(1.0, phase);
    }
    return out;
}

inline WaveFunction hartree_step(const WaveFunction& u, const ScaledBump& b, double mu,
                                 double dt) {
    WaveFunction half = free_step(u, 0.5 * dt);
    half = nonlinear_substep(half, b, mu, dt);
    return free_step(half, 0.5 * dt);
}

/// (1/2)||u'||^2 + (mu/4) <w_eps, |u|^2>^2, conserved by the flow.
inline double energy_hartree(const WaveFunction& u, const ScaledBump& b, double mu) {
    const double c = coupling(b, u);
    return 0.5 * derivative_norm_sq(u) + 0.25 * mu * c * c;
}

struct HartreeRun {
    WaveFunction initial;
    ScaledBump bump;
    double mu;
    double dt;
    double horizon;
    int stride;

    HartreeRun(WaveFunction phi, ScaledBump b, double mu_, double dt_, double horizon_,
               int stride_ = 1)
        : initial(std::move(phi)), bump(std::move(b)), mu(mu_), dt(dt_), horizon(horizon_),
          stride(stride_) {
        if (!(dt > 0.0)) throw ValidationError("HartreeRun: dt must be positive");
        if (!(horizon >= 0.0)) throw ValidationError("HartreeRun: T must be nonnegative");
        if (mu < 0.0) throw ValidationError("HartreeRun: focusing mu < 0 is out of scope");
        if (stride < 1) throw ValidationError("HartreeRun: stride must be >= 1");
    }
};

struct HartreeSample {
    double t;
    double l2;
    double energy;
    double coupling;
};

struct HartreeTrajectory {
    std::vector<std::pair<double, WaveFunction>> snapshots;
    std::vector<HartreeSample> series;  // one row per step, including t = 0
};

/// The potential height scales like 1/eps; the step guard dt <= eps h keeps
/// the per-step nonlinear phase well below pi.
inline void require_step_resolved(const ScaledBump& b, const Grid1D& grid, double dt) {
    const double ceiling = b.epsilon * grid.spacing();
    if (dt > ceiling)
        throw GuardError("stiff step: dt=" + std::to_string(dt) + " > eps*h=" +
                         std::to_string(ceiling) + " (eps=" + std::to_string(b.epsilon) + ", h=" +
                         std::to_string(grid.spacing()) + ")");
}

inline HartreeTrajectory evolve_hartree(const HartreeRun& run) {
    require_resolved(run.bump, run.initial.grid);
    require_step_resolved(run.bump, run.initial.grid, run.dt);

    const long steps = std::lround(run.horizon / run.dt);
    HartreeTrajectory traj;
    WaveFunction u = run.initial;

    auto record = [&](long step) {
        const double t = static_cast<double>(step) * run.dt;
        traj.series.push_back({t, l2_norm(u), energy_hartree(u, run.bump, run.mu),
                               coupling(run.bump, u)});
        if (step % run.stride == 0 || step == steps) traj.snapshots.emplace_back(t, u);
    };

    record(0);
    for (long s = 1; s <= steps; ++s) {
        u = hartree_step(u, run.bump, run.mu, run.dt);
        if (!all_finite(u))
            throw NumericError("evolve_hartree: non-finite state at t=" +
                               std::to_string(static_cast<double>(s) * run.dt));
        record(s);
    }
    return traj;
}

}  // namespace pointnls

#endif
