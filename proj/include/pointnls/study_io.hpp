#ifndef POINTNLS_STUDY_IO_HPP
#define POINTNLS_STUDY_IO_HPP

#include <json.hpp>

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "pointnls/experiments.hpp"

namespace pointnls {

// Config binding and file output for the studies. Echoed configs are complete
// (every key explicit) so a rerun needs nothing but the echo.

namespace detail {

inline std::string join_reals(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += format_double_exact(vs[i]);
    }
    return out;
}

inline std::string join_ints(const std::vector<long>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(vs[i]);
    }
    return out;
}

}  // namespace detail

inline EpsStudyConfig eps_study_config_from(const Config& cfg) {
    cfg.reject_unknown_keys({"L", "M", "sigma", "mu", "T", "dt", "delta", "profile", "eps_list",
                             "sample_times"});
    EpsStudyConfig out;
    out.half_width = cfg.get_real("L", out.half_width);
    out.num_points = static_cast<int>(cfg.get_int("M", out.num_points));
    out.sigma = cfg.get_real("sigma", out.sigma);
    out.mu = cfg.get_real("mu", out.mu);
    out.horizon = cfg.get_real("T", out.horizon);
    out.dt = cfg.get_real("dt", out.dt);
    out.charge_step = cfg.get_real("delta", out.charge_step);
    out.profile = cfg.get_string("profile", out.profile);
    out.eps_list = cfg.get_real_list("eps_list", out.eps_list);
    out.sample_times = cfg.get_real_list("sample_times", out.sample_times);
    return out;
}

inline Config eps_study_config_echo(const EpsStudyConfig& cfg) {
    Config echo;
    echo.set("L", format_double_exact(cfg.half_width));
    echo.set("M", std::to_string(cfg.num_points));
    echo.set("sigma", format_double_exact(cfg.sigma));
    echo.set("mu", format_double_exact(cfg.mu));
    echo.set("T", format_double_exact(cfg.horizon));
    echo.set("dt", format_double_exact(cfg.dt));
    echo.set("delta", format_double_exact(cfg.charge_step));
    echo.set("profile", cfg.profile);
    echo.set("eps_list", detail::join_reals(cfg.eps_list));
    echo.set("sample_times", detail::join_reals(cfg.sample_times));
    return echo;
}

inline ChaosStudyConfig chaos_study_config_from(const Config& cfg) {
    cfg.reject_unknown_keys({"L", "M", "sigma", "mu", "T", "dt", "delta", "eps", "eps_mode",
                             "profile", "N_list", "sample_times", "trend_time"});
    ChaosStudyConfig out;
    out.half_width = cfg.get_real("L", out.half_width);
    out.num_points = static_cast<int>(cfg.get_int("M", out.num_points));
    out.sigma = cfg.get_real("sigma", out.sigma);
    out.mu = cfg.get_real("mu", out.mu);
    out.horizon = cfg.get_real("T", out.horizon);
    out.dt = cfg.get_real("dt", out.dt);
    out.charge_step = cfg.get_real("delta", out.charge_step);
    out.eps = cfg.get_real("eps", out.eps);
    const std::string mode = cfg.get_string("eps_mode", "fixed");
    if (mode == "fixed")
        out.eps_from_log_n = false;
    else if (mode == "logN")
        out.eps_from_log_n = true;
    else
        throw ValidationError("eps_mode must be 'fixed' or 'logN', got '" + mode + "'");
    out.profile = cfg.get_string("profile", out.profile);
    out.n_list = cfg.get_int_list("N_list", out.n_list);
    out.sample_times = cfg.get_real_list("sample_times", out.sample_times);
    out.trend_time = cfg.get_real("trend_time", out.sample_times.back());
    return out;
}

inline Config chaos_study_config_echo(const ChaosStudyConfig& cfg) {
    Config echo;
    echo.set("L", format_double_exact(cfg.half_width));
    echo.set("M", std::to_string(cfg.num_points));
    echo.set("sigma", format_double_exact(cfg.sigma));
    echo.set("mu", format_double_exact(cfg.mu));
    echo.set("T", format_double_exact(cfg.horizon));
    echo.set("dt", format_double_exact(cfg.dt));
    echo.set("delta", format_double_exact(cfg.charge_step));
    echo.set("eps", format_double_exact(cfg.eps));
    echo.set("eps_mode", cfg.eps_from_log_n ? "logN" : "fixed");
    echo.set("profile", cfg.profile);
    echo.set("N_list", detail::join_ints(cfg.n_list));
    echo.set("sample_times", detail::join_reals(cfg.sample_times));
    echo.set("trend_time", format_double_exact(cfg.trend_time));
    return echo;
}

inline void write_eps_study_outputs(const std::filesystem::path& dir, const EpsStudyConfig& cfg,
                                    const EpsStudyResult& result) {
    eps_study_config_echo(cfg).write_echo(dir / "config.cfg");
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "eps_run_%02zu.csv", i);
        std::ofstream out = open_output(dir / name);
        out << "t,dist,dist_sq\n";
        const EpsStudyRow& row = result.rows[i];
        for (std::size_t s = 0; s < cfg.sample_times.size(); ++s) {
            const double d = row.dist_at_samples[s];
            out << format_double(cfg.sample_times[s]) << ',' << format_double(d) << ','
                << format_double(d * d) << "\n";
        }
    }
    {
        std::ofstream out = open_output(dir / "aggregate.csv");
        out << "eps,sup_dist,sup_dist_sq\n";
        for (const EpsStudyRow& row : result.rows)
            out << format_double(row.eps) << ',' << format_double(row.sup_dist) << ','
                << format_double(row.sup_dist_sq) << "\n";
    }
    {
        nlohmann::json summary;
        summary["study"] = "eps";
        summary["version"] = kVersion;
        summary["slope"] = result.fit.slope;
        summary["intercept"] = result.fit.intercept;
        summary["max_residual"] = result.fit.max_residual;
        summary["monotone"] = result.monotone;
        summary["slope_floor"] = result.slope_floor;
        summary["slope_ok"] = result.slope_ok;
        summary["pass"] = result.pass();
        std::vector<double> eps, sup;
        for (const EpsStudyRow& row : result.rows) {
            eps.push_back(row.eps);
            sup.push_back(row.sup_dist);
        }
        summary["eps"] = eps;
        summary["sup_dist"] = sup;
        std::ofstream out = open_output(dir / "summary.json");
        out << summary.dump(2) << "\n";
    }
}

inline void write_chaos_study_outputs(const std::filesystem::path& dir,
                                      const ChaosStudyConfig& cfg,
                                      const ChaosStudyResult& result) {
    chaos_study_config_echo(cfg).write_echo(dir / "config.cfg");
    for (long n : cfg.n_list) {
        char name[32];
        std::snprintf(name, sizeof(name), "chaos_run_N%ld.csv", n);
        std::ofstream out = open_output(dir / name);
        out << "t,d_hartree,d_delta,d_pure,bound_sum\n";
        for (const ChaosSample& s : result.samples)
            if (s.n_particles == n)
                out << format_double(s.t) << ',' << format_double(s.d_hartree) << ','
                    << format_double(s.d_delta) << ',' << format_double(s.d_pure) << ','
                    << format_double(s.bound_sum) << "\n";
    }
    {
        std::ofstream out = open_output(dir / "aggregate.csv");
        out << "N,t,d_hartree,d_delta,d_pure,bound_sum\n";
        for (const ChaosSample& s : result.samples)
            out << s.n_particles << ',' << format_double(s.t) << ','
                << format_double(s.d_hartree) << ',' << format_double(s.d_delta) << ','
                << format_double(s.d_pure) << ',' << format_double(s.bound_sum) << "\n";
    }
    {
        nlohmann::json summary;
        summary["study"] = "chaos";
        summary["version"] = kVersion;
        summary["trend_time"] = result.trend_time;
        summary["trend_ok"] = result.trend_ok;
        summary["pass"] = result.pass();
        std::vector<double> trend;
        for (const ChaosSample& s : result.samples)
            if (s.t == result.trend_time) trend.push_back(s.d_hartree);
        summary["d_hartree_at_trend_time"] = trend;
        std::ofstream out = open_output(dir / "summary.json");
        out << summary.dump(2) << "\n";
    }
}

}  // namespace pointnls

#endif
