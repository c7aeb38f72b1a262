#ifndef POINTNLS_POTENTIALS_HPP
#define POINTNLS_POTENTIALS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pointnls/errors.hpp"
#include "pointnls/wavefunction.hpp"

namespace pointnls {

/// Even, positive, rapidly decaying profile with unit integral. The default is
/// the normalized Gaussian w(x) = pi^{-1/2} e^{-x^2}; tabulated profiles are
/// interpolated linearly and vanish outside their table.
class BumpProfile {
public:
    static BumpProfile gaussian() { return BumpProfile(); }

    static BumpProfile tabulated(std::string name, std::vector<double> xs, std::vector<double> ws) {
        if (xs.size() != ws.size() || xs.size() < 3)
            throw ValidationError("tabulated profile: need >= 3 (x, w) pairs");
        std::vector<std::size_t> order(xs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
        std::vector<double> sx(xs.size()), sw(ws.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            sx[i] = xs[order[i]];
            sw[i] = ws[order[i]];
        }
        for (std::size_t i = 1; i < sx.size(); ++i)
            if (!(sx[i] > sx[i - 1])) throw ValidationError("tabulated profile: duplicate abscissa");
        BumpProfile p;
        p.name_ = std::move(name);
        p.xs_ = std::move(sx);
        p.ws_ = std::move(sw);
        p.validate();
        return p;
    }

    double operator()(double x) const {
        if (xs_.empty()) return std::exp(-x * x) / std::sqrt(M_PI);
        if (x < xs_.front() || x > xs_.back()) return 0.0;
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t hi = std::min(static_cast<std::size_t>(it - xs_.begin()), xs_.size() - 1);
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return ws_[lo];
        const double f = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
        return (1.0 - f) * ws_[lo] + f * ws_[hi];
    }

    const std::string& name() const { return name_; }

private:
    BumpProfile() = default;

    void validate() const {
        for (double w : ws_)
            if (!(w >= 0.0)) throw ValidationError("tabulated profile: negative value in table");
        double integral = 0.0;
        for (std::size_t i = 1; i < xs_.size(); ++i)
            integral += 0.5 * (ws_[i] + ws_[i - 1]) * (xs_[i] - xs_[i - 1]);
        if (std::abs(integral - 1.0) > 1e-6)
            throw ValidationError("tabulated profile: integral " + std::to_string(integral) +
                                  " deviates from 1 by more than 1e-6");
        for (std::size_t i = 0; i < xs_.size(); ++i) {
            const double mirrored = (*this)(-xs_[i]);
            if (std::abs(mirrored - ws_[i]) > 1e-8)
                throw ValidationError("tabulated profile: not even at x = " + std::to_string(xs_[i]));
        }
    }

    std::string name_ = "gaussian";
    std::vector<double> xs_;  // empty => analytic Gaussian
    std::vector<double> ws_;
};

/// Short-range scaling w_eps(x) = eps^{-1} w(x / eps), 0 < eps < 1 in the
/// scaling regime, though any positive width is accepted for diagnostics.
struct ScaledBump {
    BumpProfile profile;
    double epsilon;

    ScaledBump(BumpProfile p, double eps) : profile(std::move(p)), epsilon(eps) {
        if (!(eps > 0.0))
            throw ValidationError("ScaledBump: epsilon must be positive, got " +
                                  std::to_string(eps));
    }
};

inline double eval_w_eps(const ScaledBump& b, double x) {
    return b.profile(x / b.epsilon) / b.epsilon;
}

/// Three-body pair potential with the impurity at the origin:
/// W_eps(x_k, x_l) = w_eps(x_k) w_eps(x_l).
inline double pair_potential(const ScaledBump& b, double xk, double xl) {
    return eval_w_eps(b, xk) * eval_w_eps(b, xl);
}

/// Refuses bumps the grid cannot represent (eps < 4h).
inline void require_resolved(const ScaledBump& b, const Grid1D& grid) {
    const double floor = 4.0 * grid.spacing();
    if (b.epsilon < floor)
        throw GuardError("unresolved bump: eps=" + std::to_string(b.epsilon) + " < 4h=" +
                         std::to_string(floor) + " (L=" + std::to_string(grid.half_width()) +
                         ", M=" + std::to_string(grid.num_points()) + ")");
}

/// w_eps sampled at the grid nodes.
inline std::vector<double> sample_bump(const ScaledBump& b, const Grid1D& grid) {
    std::vector<double> w(static_cast<std::size_t>(grid.num_points()));
    for (int j = 0; j < grid.num_points(); ++j)
        w[static_cast<std::size_t>(j)] = eval_w_eps(b, grid.node(j));
    return w;
}

/// <w_eps, |u|^2> by the periodic trapezoid rule, the same quadrature as
/// l2_norm.
inline double coupling(const ScaledBump& b, const WaveFunction& u) {
    require_resolved(b, u.grid);
    double acc = 0.0;
    for (int j = 0; j < u.grid.num_points(); ++j)
        acc += eval_w_eps(b, u.grid.node(j)) * std::norm(u.values[static_cast<std::size_t>(j)]);
    return u.grid.spacing() * acc;
}

/// Short-range width tied to the particle number: eps(N) = (log N)^{-1/2}.
inline double epsilon_of_N(long n) {
    if (n < 2) throw ValidationError("epsilon_of_N: need N >= 2, got " + std::to_string(n));
    return 1.0 / std::sqrt(std::log(static_cast<double>(n)));
}

}  // namespace pointnls

#endif
