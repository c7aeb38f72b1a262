#ifndef POINTNLS_EXPERIMENTS_HPP
#define POINTNLS_EXPERIMENTS_HPP

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pointnls/charge.hpp"
#include "pointnls/config.hpp"
#include "pointnls/defaults.hpp"
#include "pointnls/errors.hpp"
#include "pointnls/hartree.hpp"
#include "pointnls/io.hpp"
#include "pointnls/manybody.hpp"
#include "pointnls/potentials.hpp"

namespace pointnls {

// Convergence studies: the eps -> 0 one-body limit and the small-N
// propagation-of-chaos trend. Every study is deterministic: fixed iteration
// orders, per-run outputs assembled by a single-threaded aggregator.

/// Log-log least squares y ~ exp(intercept) x^slope.
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // in log space
};

inline RateFit fit_rate(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw ValidationError("fit_rate: need >= 3 matching points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw ValidationError("fit_rate: inputs must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0) throw ValidationError("fit_rate: degenerate abscissae");
    RateFit fit;
    fit.slope = (dn * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / dn;
    for (std::size_t i = 0; i < n; ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ly[i] - fit.slope * lx[i] - fit.intercept));
    if (!std::isfinite(fit.slope)) throw NumericError("fit_rate: non-finite slope");
    return fit;
}

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(jobs)));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline long mesh_steps(double t, double step, const std::string& what) {
    const long n = std::lround(t / step);
    if (n < 0 || std::abs(t - static_cast<double>(n) * step) > 1e-9 * std::max(1.0, std::abs(t)))
        throw ValidationError(what + ": time " + format_double_exact(t) +
                              " is not a multiple of " + format_double_exact(step));
    return n;
}

inline void require_commensurate(double dt, double charge_step) {
    const double big = std::max(dt, charge_step);
    const double small = std::min(dt, charge_step);
    const double ratio = big / small;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw ValidationError("dt and Delta must be commensurate (one divides the other): dt=" +
                              format_double_exact(dt) + ", Delta=" +
                              format_double_exact(charge_step));
}

inline WaveFunction grid_normalized(WaveFunction psi) {
    const double n = l2_norm(psi);
    if (!(n > 0.0)) throw ValidationError("cannot normalize the zero state");
    for (cplx& v : psi.values) v /= n;
    return psi;
}

/// Hartree states at the requested sample times (no temporal interpolation;
/// sample times must sit on the dt mesh).
inline std::vector<WaveFunction> hartree_at_samples(const WaveFunction& phi, const ScaledBump& b,
                                                    double mu, double dt,
                                                    std::span<const double> sample_times) {
    require_resolved(b, phi.grid);
    require_step_resolved(b, phi.grid, dt);
    std::vector<WaveFunction> out;
    out.reserve(sample_times.size());
    WaveFunction u = phi;
    long done = 0;
    for (double t : sample_times) {
        const long goal = mesh_steps(t, dt, "hartree sample");
        if (goal < done) throw ValidationError("sample times must be nondecreasing");
        for (; done < goal; ++done) u = hartree_step(u, b, mu, dt);
        if (!all_finite(u))
            throw NumericError("hartree run produced non-finite state at t=" + format_double_exact(t));
        out.push_back(u);
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// eps -> 0 study: sup_t || u_{eps,t} - phi_t ||^2 against eps.

struct EpsStudyConfig {
    double half_width = defaults::kHalfWidth;
    int num_points = 4096;
    double sigma = defaults::kSigma;
    double mu = defaults::kMu;
    double horizon = defaults::kHorizon;
    double dt = 2.5e-4;
    double charge_step = defaults::kChargeStep;
    std::string profile = "gaussian";
    std::vector<double> eps_list = {0.4, 0.2, 0.1, 0.05};
    std::vector<double> sample_times = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int jobs = 1;
};

struct EpsStudyRow {
    double eps;
    double sup_dist;     // sup over sample times of || u_eps - phi ||
    double sup_dist_sq;  // the squared quantity of the convergence statement
    std::vector<double> dist_at_samples;
};

struct EpsStudyResult {
    std::vector<EpsStudyRow> rows;  // sorted by eps descending (config order)
    RateFit fit;                    // || . || against eps
    bool monotone = false;
    bool slope_ok = false;
    double slope_floor = 0.25;
    bool pass() const { return monotone && slope_ok; }
};

/// "gaussian" selects the analytic default; any other value is read as a
/// two-column (x, w) CSV table.
inline BumpProfile profile_by_name(const std::string& name) {
    if (name == "gaussian") return BumpProfile::gaussian();
    auto [xs, ws] = read_profile_csv(name);
    return BumpProfile::tabulated(name, std::move(xs), std::move(ws));
}

inline void validate(const EpsStudyConfig& cfg) {
    const Grid1D grid(cfg.half_width, cfg.num_points);
    if (cfg.eps_list.empty()) throw ValidationError("eps study: empty eps list");
    for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
        if (!(cfg.eps_list[i] < cfg.eps_list[i - 1]))
            throw ValidationError("eps study: eps list must be strictly descending");
    for (double eps : cfg.eps_list)
        require_resolved(ScaledBump(profile_by_name(cfg.profile), eps), grid);
    if (cfg.sample_times.empty()) throw ValidationError("eps study: empty sample times");
    for (double t : cfg.sample_times) {
        if (t > cfg.horizon + 1e-12)
            throw ValidationError("eps study: sample time beyond horizon");
        detail::mesh_steps(t, cfg.dt, "eps study sample");
        detail::mesh_steps(t, cfg.charge_step, "eps study sample");
    }
    detail::require_commensurate(cfg.dt, cfg.charge_step);
}

inline EpsStudyResult run_eps_study(const EpsStudyConfig& cfg) {
    validate(cfg);
    const Grid1D grid(cfg.half_width, cfg.num_points);
    const WaveFunction phi = detail::grid_normalized(gaussian_packet(grid, cfg.sigma));
    const BumpProfile profile = profile_by_name(cfg.profile);

    // The point-nonlinearity leg does not depend on eps: solve once.
    const long n_max = detail::mesh_steps(cfg.horizon, cfg.charge_step, "eps study horizon");
    const ChargeTrajectory traj = solve_charge(phi, cfg.mu, cfg.charge_step, n_max);
    std::vector<WaveFunction> delta_states;
    delta_states.reserve(cfg.sample_times.size());
    for (double t : cfg.sample_times) delta_states.push_back(reconstruct(phi, traj, t));

    EpsStudyResult result;
    result.rows.resize(cfg.eps_list.size());
    detail::parallel_for(cfg.eps_list.size(), cfg.jobs, [&](std::size_t i) {
        const double eps = cfg.eps_list[i];
        const ScaledBump bump(profile, eps);
        const std::vector<WaveFunction> hartree_states =
            detail::hartree_at_samples(phi, bump, cfg.mu, cfg.dt, cfg.sample_times);
        EpsStudyRow row;
        row.eps = eps;
        row.sup_dist_sq = 0.0;
        for (std::size_t s = 0; s < cfg.sample_times.size(); ++s) {
            const double dist = l2_distance(hartree_states[s], delta_states[s]);
            if (!std::isfinite(dist))
                throw NumericError("eps study: non-finite distance at eps=" +
                                   format_double_exact(eps) + ", t=" +
                                   format_double_exact(cfg.sample_times[s]));
            row.dist_at_samples.push_back(dist);
            row.sup_dist_sq = std::max(row.sup_dist_sq, dist * dist);
        }
        row.sup_dist = std::sqrt(row.sup_dist_sq);
        result.rows[i] = std::move(row);
    });

    result.monotone = true;
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        if (!(result.rows[i].sup_dist < result.rows[i - 1].sup_dist)) result.monotone = false;

    std::vector<double> xs, ys;
    for (const auto& row : result.rows) {
        xs.push_back(row.eps);
        ys.push_back(row.sup_dist);
    }
    result.fit = fit_rate(xs, ys);
    result.slope_ok = result.fit.slope >= result.slope_floor;
    return result;
}

// ---------------------------------------------------------------------------
// Small-N propagation-of-chaos trend via the triangular split
//   Tr|gamma - P_phi| <= Tr|gamma - P_u| + Tr|P_u - P_phi|.

struct ChaosStudyConfig {
    double half_width = 2.0;
    int num_points = 32;
    double sigma = 0.7071067811865476;  // minimizes the spread over [0, 1/2]
    double mu = defaults::kMu;
    double horizon = 0.5;
    double dt = defaults::kDt;
    double charge_step = defaults::kChargeStep;
    double eps = defaults::kEps;
    bool eps_from_log_n = false;  // eps = (log N)^{-1/2} instead of fixed
    std::string profile = "gaussian";
    std::vector<long> n_list = {2, 3, 4};
    std::vector<double> sample_times = {0.25, 0.5};
    double trend_time = 0.5;
    int jobs = 1;
};

struct ChaosSample {
    long n_particles;
    double t;
    double d_hartree;  // Tr|gamma - P_u|
    double d_delta;    // Tr|gamma - P_phi|
    double d_pure;     // Tr|P_u - P_phi| = 2 sqrt(1 - |<u, phi>|^2)
    double bound_sum;  // d_hartree + d_pure, the triangular surrogate
};

struct ChaosStudyResult {
    std::vector<ChaosSample> samples;  // ordered by (N, t)
    bool trend_ok = false;             // d_hartree decreasing in N at trend_time
    double trend_time = 0.0;
    bool pass() const { return trend_ok; }
};

inline void validate(const ChaosStudyConfig& cfg) {
    const Grid1D grid(cfg.half_width, cfg.num_points);
    if (cfg.n_list.empty()) throw ValidationError("chaos study: empty N list");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 2 || cfg.n_list[i] > 4)
            throw ValidationError("chaos study: N must lie in {2, 3, 4}");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
            throw ValidationError("chaos study: N list must be strictly increasing");
        require_tensor_budget(cfg.num_points, static_cast<int>(cfg.n_list[i]));
    }
    if (cfg.sample_times.empty()) throw ValidationError("chaos study: empty sample times");
    for (double t : cfg.sample_times) {
        if (t > cfg.horizon + 1e-12)
            throw ValidationError("chaos study: sample time beyond horizon");
        detail::mesh_steps(t, cfg.dt, "chaos study sample");
        detail::mesh_steps(t, cfg.charge_step, "chaos study sample");
    }
    detail::require_commensurate(cfg.dt, cfg.charge_step);
    const BumpProfile profile = profile_by_name(cfg.profile);
    for (long n : cfg.n_list) {
        const double eps = cfg.eps_from_log_n ? epsilon_of_N(n) : cfg.eps;
        require_resolved(ScaledBump(profile, eps), grid);
        require_step_resolved(ScaledBump(profile, eps), grid, cfg.dt);
    }
    detail::mesh_steps(cfg.trend_time, cfg.dt, "chaos trend time");
}

inline ChaosStudyResult run_chaos_study(const ChaosStudyConfig& cfg) {
    validate(cfg);
    const Grid1D grid(cfg.half_width, cfg.num_points);
    const WaveFunction phi = detail::grid_normalized(gaussian_packet(grid, cfg.sigma));
    const BumpProfile profile = profile_by_name(cfg.profile);

    // Point-nonlinearity leg, shared across N. The reconstructed states are
    // renormalized before projector distances (their norm carries the
    // reconstruction quadrature error).
    const long n_max = detail::mesh_steps(cfg.horizon, cfg.charge_step, "chaos study horizon");
    const ChargeTrajectory traj = solve_charge(phi, cfg.mu, cfg.charge_step, n_max);
    std::vector<WaveFunction> delta_states;
    for (double t : cfg.sample_times)
        delta_states.push_back(detail::grid_normalized(reconstruct(phi, traj, t)));

    ChaosStudyResult result;
    result.trend_time = cfg.trend_time;
    std::vector<std::vector<ChaosSample>> per_n(cfg.n_list.size());

    detail::parallel_for(cfg.n_list.size(), cfg.jobs, [&](std::size_t i) {
        const int n = static_cast<int>(cfg.n_list[i]);
        const double eps = cfg.eps_from_log_n ? epsilon_of_N(n) : cfg.eps;
        const ScaledBump bump(profile, eps);
        const std::vector<WaveFunction> hartree_states =
            detail::hartree_at_samples(phi, bump, cfg.mu, cfg.dt, cfg.sample_times);

        ManyBodyState psi = build_factorized(phi, n);
        double reached = 0.0;
        for (std::size_t s = 0; s < cfg.sample_times.size(); ++s) {
            const double t = cfg.sample_times[s];
            psi = evolve_manybody(std::move(psi), bump, cfg.mu, cfg.dt, t - reached);
            reached = t;
            const ReducedDensity gamma = reduced_density(psi);
            ChaosSample sample;
            sample.n_particles = n;
            sample.t = t;
            sample.d_hartree = trace_distance(gamma, hartree_states[s]);
            sample.d_delta = trace_distance(gamma, delta_states[s]);
            sample.d_pure = pure_trace_distance(hartree_states[s], delta_states[s]);
            sample.bound_sum = sample.d_hartree + sample.d_pure;
            if (!std::isfinite(sample.d_hartree) || !std::isfinite(sample.d_delta))
                throw NumericError("chaos study: non-finite distance at N=" + std::to_string(n) +
                                   ", t=" + format_double_exact(t));
            per_n[i].push_back(sample);
        }
    });

    for (auto& rows : per_n)
        for (auto& sample : rows) result.samples.push_back(sample);

    // Trend of the mean-field leg at the configured time.
    std::vector<double> trend;
    for (const auto& sample : result.samples)
        if (sample.t == cfg.trend_time) trend.push_back(sample.d_hartree);
    result.trend_ok = trend.size() == cfg.n_list.size();
    for (std::size_t i = 1; i < trend.size(); ++i)
        if (!(trend[i] < trend[i - 1])) result.trend_ok = false;
    return result;
}

}  // namespace pointnls

#endif
