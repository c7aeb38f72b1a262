// Command-line front end: simulators and convergence studies with
// reproducible flat-text configs.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "pointnls/pointnls.hpp"
#include "pointnls/study_io.hpp"

namespace fs = std::filesystem;
using namespace pointnls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStudyFail = 1;  // an embedded study property failed
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitGuard = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    bool quiet = false;
};

Config load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return Config();
    return Config::parse_file(args.config_path);
}

void say(const CommonArgs& args, const std::string& line) {
    if (!args.quiet) std::cout << line << "\n";
}

// ---------------------------------------------------------------------- //

struct HartreeCliConfig {
    double half_width = defaults::kHalfWidth;
    int num_points = defaults::kOneBodyPoints;
    double sigma = defaults::kSigma;
    double mu = defaults::kMu;
    double eps = defaults::kEps;
    double dt = defaults::kDt;
    double horizon = defaults::kHorizon;
    long stride = 100;
    std::string profile = "gaussian";
};

HartreeCliConfig hartree_config_from(const Config& cfg) {
    cfg.reject_unknown_keys({"L", "M", "sigma", "mu", "eps", "dt", "T", "stride", "profile"});
    HartreeCliConfig out;
    out.half_width = cfg.get_real("L", out.half_width);
    out.num_points = static_cast<int>(cfg.get_int("M", out.num_points));
    out.sigma = cfg.get_real("sigma", out.sigma);
    out.mu = cfg.get_real("mu", out.mu);
    out.eps = cfg.get_real("eps", out.eps);
    out.dt = cfg.get_real("dt", out.dt);
    out.horizon = cfg.get_real("T", out.horizon);
    out.stride = cfg.get_int("stride", out.stride);
    out.profile = cfg.get_string("profile", out.profile);
    return out;
}

Config hartree_config_echo(const HartreeCliConfig& cfg) {
    Config echo;
    echo.set("L", format_double_exact(cfg.half_width));
    echo.set("M", std::to_string(cfg.num_points));
    echo.set("sigma", format_double_exact(cfg.sigma));
    echo.set("mu", format_double_exact(cfg.mu));
    echo.set("eps", format_double_exact(cfg.eps));
    echo.set("dt", format_double_exact(cfg.dt));
    echo.set("T", format_double_exact(cfg.horizon));
    echo.set("stride", std::to_string(cfg.stride));
    echo.set("profile", cfg.profile);
    return echo;
}

int run_simulate_hartree(const CommonArgs& args) {
    const HartreeCliConfig cfg = hartree_config_from(load_config(args));
    const fs::path dir(args.out_dir);
    hartree_config_echo(cfg).write_echo(dir / "config.cfg");

    const Grid1D grid(cfg.half_width, cfg.num_points);
    const WaveFunction phi = gaussian_packet(grid, cfg.sigma);
    const ScaledBump bump(profile_by_name(cfg.profile), cfg.eps);
    HartreeRun run(phi, bump, cfg.mu, cfg.dt, cfg.horizon, static_cast<int>(cfg.stride));
    const HartreeTrajectory traj = evolve_hartree(run);

    {
        std::ofstream out = open_output(dir / "series.csv");
        out << "t,l2,energy,coupling\n";
        for (const HartreeSample& s : traj.series)
            out << format_double(s.t) << ',' << format_double(s.l2) << ','
                << format_double(s.energy) << ',' << format_double(s.coupling) << "\n";
    }
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "state_%04zu.csv", i);
        write_state_csv(dir / name, traj.snapshots[i].second, traj.snapshots[i].first);
    }
    say(args, "hartree run: " + std::to_string(traj.series.size() - 1) + " steps, " +
                  std::to_string(traj.snapshots.size()) + " snapshots -> " + dir.string());
    return kExitOk;
}

// ---------------------------------------------------------------------- //

struct DeltaCliConfig {
    double half_width = defaults::kHalfWidth;
    int num_points = defaults::kOneBodyPoints;
    double sigma = defaults::kSigma;
    double mu = defaults::kMu;
    double charge_step = defaults::kChargeStep;
    double horizon = defaults::kHorizon;
    long stride = 250;  // reconstruction stride, in charge-mesh nodes
};

DeltaCliConfig delta_config_from(const Config& cfg) {
    cfg.reject_unknown_keys({"L", "M", "sigma", "mu", "delta", "T", "stride"});
    DeltaCliConfig out;
    out.half_width = cfg.get_real("L", out.half_width);
    out.num_points = static_cast<int>(cfg.get_int("M", out.num_points));
    out.sigma = cfg.get_real("sigma", out.sigma);
    out.mu = cfg.get_real("mu", out.mu);
    out.charge_step = cfg.get_real("delta", out.charge_step);
    out.horizon = cfg.get_real("T", out.horizon);
    out.stride = cfg.get_int("stride", out.stride);
    return out;
}

Config delta_config_echo(const DeltaCliConfig& cfg) {
    Config echo;
    echo.set("L", format_double_exact(cfg.half_width));
    echo.set("M", std::to_string(cfg.num_points));
    echo.set("sigma", format_double_exact(cfg.sigma));
    echo.set("mu", format_double_exact(cfg.mu));
    echo.set("delta", format_double_exact(cfg.charge_step));
    echo.set("T", format_double_exact(cfg.horizon));
    echo.set("stride", std::to_string(cfg.stride));
    return echo;
}

int run_simulate_delta(const CommonArgs& args) {
    const DeltaCliConfig cfg = delta_config_from(load_config(args));
    if (cfg.stride < 1) throw ValidationError("stride must be >= 1");
    const fs::path dir(args.out_dir);
    delta_config_echo(cfg).write_echo(dir / "config.cfg");

    const Grid1D grid(cfg.half_width, cfg.num_points);
    const WaveFunction phi = gaussian_packet(grid, cfg.sigma);
    const long n_max = std::lround(cfg.horizon / cfg.charge_step);
    const ChargeTrajectory traj = solve_charge(phi, cfg.mu, cfg.charge_step, n_max);

    {
        std::ofstream out = open_output(dir / "charge.csv");
        out << "t,re_q,im_q,abs2_q\n";
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            out << format_double(traj.times[i]) << ',' << format_double(traj.q[i].real()) << ','
                << format_double(traj.q[i].imag()) << ',' << format_double(std::norm(traj.q[i]))
                << "\n";
    }
    {
        std::ofstream out = open_output(dir / "series.csv");
        out << "t,l2,h1,energy\n";
        std::size_t snapshot = 0;
        for (long nd = 0; nd <= n_max; nd += cfg.stride) {
            const double t = traj.times[static_cast<std::size_t>(nd)];
            const WaveFunction rec = reconstruct(phi, traj, t);
            out << format_double(t) << ',' << format_double(l2_norm(rec)) << ','
                << format_double(h1_norm(rec)) << ',' << format_double(energy_delta(rec, cfg.mu))
                << "\n";
            char name[32];
            std::snprintf(name, sizeof(name), "state_%04zu.csv", snapshot++);
            write_state_csv(dir / name, rec, t);
        }
    }
    say(args, "delta run: " + std::to_string(n_max) + " charge nodes -> " + dir.string());
    return kExitOk;
}

// ---------------------------------------------------------------------- //

struct ManyBodyCliConfig {
    int n_particles = 3;
    double half_width = 2.0;
    int num_points = defaults::kManyBodyPointsN23;
    double sigma = 0.7071067811865476;
    double mu = defaults::kMu;
    double eps = defaults::kEps;
    double dt = defaults::kDt;
    double horizon = 0.5;
    long stride = 100;
    std::string profile = "gaussian";
};

ManyBodyCliConfig manybody_config_from(const Config& cfg) {
    cfg.reject_unknown_keys({"N", "L", "M", "sigma", "mu", "eps", "dt", "T", "stride", "profile"});
    ManyBodyCliConfig out;
    out.n_particles = static_cast<int>(cfg.get_int("N", out.n_particles));
    out.half_width = cfg.get_real("L", out.half_width);
    if (cfg.has("N") && !cfg.has("M"))
        out.num_points = out.n_particles >= 4 ? defaults::kManyBodyPointsN4
                                              : defaults::kManyBodyPointsN23;
    out.num_points = static_cast<int>(cfg.get_int("M", out.num_points));
    out.sigma = cfg.get_real("sigma", out.sigma);
    out.mu = cfg.get_real("mu", out.mu);
    out.eps = cfg.get_real("eps", out.eps);
    out.dt = cfg.get_real("dt", out.dt);
    out.horizon = cfg.get_real("T", out.horizon);
    out.stride = cfg.get_int("stride", out.stride);
    out.profile = cfg.get_string("profile", out.profile);
    return out;
}

Config manybody_config_echo(const ManyBodyCliConfig& cfg) {
    Config echo;
    echo.set("N", std::to_string(cfg.n_particles));
    echo.set("L", format_double_exact(cfg.half_width));
    echo.set("M", std::to_string(cfg.num_points));
    echo.set("sigma", format_double_exact(cfg.sigma));
    echo.set("mu", format_double_exact(cfg.mu));
    echo.set("eps", format_double_exact(cfg.eps));
    echo.set("dt", format_double_exact(cfg.dt));
    echo.set("T", format_double_exact(cfg.horizon));
    echo.set("stride", std::to_string(cfg.stride));
    echo.set("profile", cfg.profile);
    return echo;
}

int run_simulate_manybody(const CommonArgs& args) {
    const ManyBodyCliConfig cfg = manybody_config_from(load_config(args));
    if (cfg.stride < 1) throw ValidationError("stride must be >= 1");
    const fs::path dir(args.out_dir);
    manybody_config_echo(cfg).write_echo(dir / "config.cfg");

    const Grid1D grid(cfg.half_width, cfg.num_points);
    WaveFunction phi = gaussian_packet(grid, cfg.sigma);
    const double norm = l2_norm(phi);
    for (cplx& v : phi.values) v /= norm;
    const ScaledBump bump(profile_by_name(cfg.profile), cfg.eps);

    ManyBodyState psi = build_factorized(phi, cfg.n_particles);
    const long steps = std::lround(cfg.horizon / cfg.dt);
    {
        std::ofstream out = open_output(dir / "series.csv");
        out << "t,l2,symmetry_residual\n";
        out << format_double(0.0) << ',' << format_double(l2_norm(psi)) << ','
            << format_double(symmetry_residual(psi)) << "\n";
        for (long done = 0; done < steps;) {
            const long chunk = std::min(cfg.stride, steps - done);
            psi = evolve_manybody(std::move(psi), bump, cfg.mu, cfg.dt,
                                  static_cast<double>(chunk) * cfg.dt);
            done += chunk;
            out << format_double(static_cast<double>(done) * cfg.dt) << ','
                << format_double(l2_norm(psi)) << ',' << format_double(symmetry_residual(psi))
                << "\n";
        }
    }
    const ReducedDensity gamma = reduced_density(psi);
    {
        std::ofstream out = open_output(dir / "density.csv");
        out << "i,j,re,im\n";
        for (int i = 0; i < grid.num_points(); ++i)
            for (int j = 0; j < grid.num_points(); ++j)
                out << i << ',' << j << ',' << format_double(gamma.kernel(i, j).real()) << ','
                    << format_double(gamma.kernel(i, j).imag()) << "\n";
    }
    {
        const Eigen::VectorXd ev = density_eigenvalues(gamma);
        std::ofstream out = open_output(dir / "eigenvalues.csv");
        out << "index,value\n";
        for (int i = 0; i < ev.size(); ++i) out << i << ',' << format_double(ev(i)) << "\n";
    }
    {
        nlohmann::json meta;
        meta["N"] = cfg.n_particles;
        meta["M"] = cfg.num_points;
        meta["L"] = cfg.half_width;
        meta["eps"] = cfg.eps;
        meta["mu"] = cfg.mu;
        meta["dt"] = cfg.dt;
        meta["T"] = cfg.horizon;
        meta["version"] = kVersion;
        std::ofstream out = open_output(dir / "metadata.json");
        out << meta.dump(2) << "\n";
    }
    say(args, "manybody run: N=" + std::to_string(cfg.n_particles) + " -> " + dir.string());
    return kExitOk;
}

// ---------------------------------------------------------------------- //

int run_study_eps(const CommonArgs& args) {
    EpsStudyConfig cfg = eps_study_config_from(load_config(args));
    cfg.jobs = args.jobs;
    const EpsStudyResult result = run_eps_study(cfg);
    write_eps_study_outputs(args.out_dir, cfg, result);
    say(args, "eps study: slope=" + format_double(result.fit.slope, 6) +
                  " monotone=" + (result.monotone ? std::string("yes") : std::string("no")) +
                  " -> " + args.out_dir);
    return result.pass() ? kExitOk : kExitStudyFail;
}

int run_study_chaos(const CommonArgs& args) {
    ChaosStudyConfig cfg = chaos_study_config_from(load_config(args));
    cfg.jobs = args.jobs;
    const ChaosStudyResult result = run_chaos_study(cfg);
    write_chaos_study_outputs(args.out_dir, cfg, result);
    say(args, std::string("chaos study: trend ") + (result.trend_ok ? "ok" : "FAILED") + " -> " +
                  args.out_dir);
    return result.pass() ? kExitOk : kExitStudyFail;
}

// ---------------------------------------------------------------------- //

int run_selftest(const CommonArgs& args) {
    auto check = [](bool ok, const std::string& what) {
        if (!ok) throw NumericError("selftest failed: " + what);
    };
    {
        const Grid1D grid(1.0, 8);
        WaveFunction ones(grid);
        for (cplx& v : ones.values) v = 1.0;
        check(l2_norm(WaveFunction(grid)) == 0.0, "zero norm");
        check(std::abs(l2_norm(ones) - std::sqrt(2.0)) < 1e-14, "constant norm");
        check(std::abs(h1_norm(ones) - l2_norm(ones)) < 1e-12, "constant h1");
    }
    {
        const Grid1D grid(20.0, 256);
        const WaveFunction phi = gaussian_packet(grid, 1.0);
        check(sup_distance(free_step(phi, 0.0), phi) < 1e-15, "free_step(0) identity");
        check(sup_distance(free_step(free_step(phi, 0.37), -0.37), phi) < 1e-12,
              "free_step reversibility");
        check(std::abs(free_kernel(0.3, 0.5) - free_kernel(0.3, -0.5)) == 0.0,
              "free_kernel even");
        check(std::abs(std::abs(free_kernel(0.3, 0.5)) - 1.0 / std::sqrt(4.0 * M_PI * 0.3)) <
                  1e-14,
              "free_kernel modulus");
        check(energy_delta(WaveFunction(grid), 1.0) == 0.0, "zero energy");
    }
    say(args, "[ok] core");
    {
        const Grid1D grid(20.0, 1024);
        const WaveFunction phi = gaussian_packet(grid, 1.0);
        const ScaledBump b1(BumpProfile::gaussian(), 1.0);
        check(std::abs(eval_w_eps(b1, 0.0) - 1.0 / std::sqrt(M_PI)) < 1e-14, "bump peak");
        check(eval_w_eps(b1, 0.7) == eval_w_eps(b1, -0.7), "bump even");
        double quad = 0.0;
        for (int j = 0; j < grid.num_points(); ++j) quad += eval_w_eps(b1, grid.node(j));
        check(std::abs(quad * grid.spacing() - 1.0) < 1e-10, "bump quadrature");
        check(pair_potential(b1, 0.3, -1.2) == pair_potential(b1, -1.2, 0.3), "pair symmetric");
        check(epsilon_of_N(100) < epsilon_of_N(10), "epsilon_of_N monotone");
        WaveFunction u = phi;  // constant density over the bump: coupling -> that constant
        for (int j = 0; j < grid.num_points(); ++j) u.values[static_cast<std::size_t>(j)] = 0.5;
        check(std::abs(coupling(b1, u) - 0.25) < 1e-10, "coupling of constant density");
    }
    say(args, "[ok] potentials");
    {
        const Grid1D grid(20.0, 512);
        const WaveFunction phi = gaussian_packet(grid, 1.0);
        const ScaledBump bump(BumpProfile::gaussian(), 0.5);
        check(sup_distance(hartree_step(phi, bump, 0.0, 1e-3), free_step(phi, 1e-3)) < 1e-13,
              "hartree mu=0 is free");
        const WaveFunction sub = nonlinear_substep(phi, bump, 1.0, 1e-3);
        double worst = 0.0;
        for (std::size_t j = 0; j < sub.values.size(); ++j)
            worst = std::max(worst, std::abs(std::abs(sub.values[j]) - std::abs(phi.values[j])));
        check(worst < 1e-15, "nonlinear substep modulus");
    }
    say(args, "[ok] hartree");
    {
        const Grid1D grid(20.0, 512);
        const WaveFunction phi = gaussian_packet(grid, 1.0);
        const ChargeTrajectory traj = solve_charge(phi, 0.0, 1e-3, 100);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.q.size(); ++i)
            worst = std::max(worst, std::abs(traj.q[i] - traj.source[i]));
        check(worst == 0.0, "mu=0 charge equals source");
        check(std::abs(traj.q[0] - phi.at_origin()) < 1e-12, "q0 = phi(0)");
        const AbelWeights w(1e-3);
        double sum = 0.0;
        for (long j = 0; j < 100; ++j) sum += w.interval_weight(100, j);
        check(std::abs(sum - 2.0 * std::sqrt(0.1)) < 1e-13, "Abel telescoping");
        check(sup_distance(reconstruct(phi, traj, 0.1), free_step(phi, 0.1)) < 1e-12,
              "mu=0 reconstruct is free");
    }
    say(args, "[ok] delta");
    {
        const Grid1D grid(8.0, 32);
        WaveFunction phi = gaussian_packet(grid, 1.0);
        const double nn = l2_norm(phi);
        for (cplx& v : phi.values) v /= nn;
        const WaveFunction perp = odd_packet(grid, 1.0);
        const ManyBodyState fact = build_factorized(phi, 2);
        check(std::abs(l2_norm(fact) - 1.0) < 1e-12, "factorized norm");
        check(symmetry_residual(fact) < 1e-15, "factorized symmetry");
        const ReducedDensity self = defect_reduced_density(phi, perp, 2);
        check(std::abs(trace_distance(self, phi) - 1.0) < 1e-12, "defect distance N=2");
        check(std::abs(trace_distance(defect_reduced_density(phi, perp, 2), perp) - 1.0) < 1e-12,
              "defect distance to perp");
        const ReducedDensity pure = reduced_density(fact);
        check(trace_distance(pure, phi) < 1e-12, "pure state distance zero");
        check(std::abs(trace_distance(pure, perp) - 2.0) < 1e-12, "orthogonal distance two");
    }
    say(args, "[ok] manybody");
    {
        const std::vector<double> xs = {1.0, 2.0, 4.0, 8.0};
        std::vector<double> ys = xs;
        check(std::abs(fit_rate(xs, ys).slope - 1.0) < 1e-12, "fit slope 1");
        for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = xs[i] * xs[i];
        check(std::abs(fit_rate(xs, ys).slope - 2.0) < 1e-12, "fit slope 2");
    }
    say(args, "[ok] experiments");
    say(args, "selftest passed");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pointnls: spectral solvers for the 1D NLS with point-concentrated "
                 "nonlinearity and its many-boson parent model"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string command;
    for (const char* name : {"simulate-hartree", "simulate-delta", "simulate-manybody",
                             "study-eps", "study-chaos", "selftest"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "flat key = value config file");
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--jobs", args.jobs, "worker cap for studies")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", args.quiet, "suppress progress output");
        sub->callback([&command, name]() { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (command == "simulate-hartree") return run_simulate_hartree(args);
        if (command == "simulate-delta") return run_simulate_delta(args);
        if (command == "simulate-manybody") return run_simulate_manybody(args);
        if (command == "study-eps") return run_study_eps(args);
        if (command == "study-chaos") return run_study_chaos(args);
        if (command == "selftest") return run_selftest(args);
        std::cerr << "unknown command\n";
        return kExitValidation;
    } catch (const GuardError& e) {
        std::cerr << "guard refusal: " << e.what() << "\n";
        return kExitGuard;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
