#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pointnls/pointnls.hpp"

using namespace pointnls;

namespace {

// Fine-quadrature reference for <w_eps, |u|^2> with Gaussian u, independent of
// the grid: integrand sampled on a dedicated dense mesh.
double fine_coupling(double eps, double sigma) {
    const double radius = 12.0;
    const long n = 400000;
    const double dx = 2.0 * radius / static_cast<double>(n);
    const double amp = 1.0 / std::sqrt(2.0 * M_PI * sigma * sigma);
    double acc = 0.0;
    for (long i = 0; i <= n; ++i) {
        const double x = -radius + static_cast<double>(i) * dx;
        const double w = std::exp(-(x / eps) * (x / eps)) / (eps * std::sqrt(M_PI));
        const double density = amp * std::exp(-x * x / (2.0 * sigma * sigma));
        acc += ((i == 0 || i == n) ? 0.5 : 1.0) * w * density;
    }
    return acc * dx;
}

}  // namespace

TEST_CASE("eval_w_eps") {
    const ScaledBump unit(BumpProfile::gaussian(), 1.0);
    CHECK(eval_w_eps(unit, 0.0) == Catch::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(eval_w_eps(unit, 0.37) == eval_w_eps(unit, -0.37));

    const Grid1D grid(20.0, 1024);
    for (double eps : {1.0, 0.5, 0.1}) {
        const ScaledBump b(BumpProfile::gaussian(), eps);
        double quad = 0.0;
        for (int j = 0; j < grid.num_points(); ++j) quad += eval_w_eps(b, grid.node(j));
        CHECK(std::abs(quad * grid.spacing() - 1.0) < 1e-10);
    }
}

TEST_CASE("pair_potential") {
    const ScaledBump b(BumpProfile::gaussian(), 1.0);
    CHECK(pair_potential(b, 0.4, -1.3) == pair_potential(b, -1.3, 0.4));
    CHECK(pair_potential(b, 0.0, 0.0) == Catch::Approx(1.0 / M_PI).epsilon(1e-14));

    for (double eps : {1.0, 0.3}) {
        const ScaledBump be(BumpProfile::gaussian(), eps);
        CHECK(pair_potential(be, 10.0 * eps, 0.0) <= 1e-30);
        CHECK(pair_potential(be, 0.2, -12.0 * eps) <= 1e-30);
    }

    SECTION("product structure integrates to one") {
        const Grid1D grid(20.0, 1024);
        const ScaledBump be(BumpProfile::gaussian(), 0.5);
        double line = 0.0;
        for (int j = 0; j < grid.num_points(); ++j) line += eval_w_eps(be, grid.node(j));
        line *= grid.spacing();
        CHECK(std::abs(line * line - 1.0) < 1e-8);  // int W = (int w_eps)^2
    }
}

TEST_CASE("coupling") {
    const Grid1D grid(20.0, 1024);
    const ScaledBump b(BumpProfile::gaussian(), 0.5);

    CHECK(coupling(b, WaveFunction(grid)) == 0.0);

    SECTION("constant density passes through") {
        WaveFunction u(grid);
        for (cplx& v : u.values) v = cplx(0.6, 0.8);  // |u|^2 = 1
        CHECK(std::abs(coupling(b, u) - 1.0) < 1e-10);
    }

    SECTION("resolution guard") {
        const ScaledBump thin(BumpProfile::gaussian(), 0.1);
        CHECK_THROWS_AS(coupling(thin, WaveFunction(Grid1D(20.0, 256))), GuardError);
    }

    SECTION("matches fine quadrature and the eps -> 0 limit") {
        const Grid1D fine_grid(20.0, 2048);
        const WaveFunction u = gaussian_packet(fine_grid, 1.0);
        const ScaledBump thin(BumpProfile::gaussian(), 0.1);
        const double c = coupling(thin, u);
        CHECK(c == Catch::Approx(fine_coupling(0.1, 1.0)).epsilon(1e-10));
        const double density_at_zero = 1.0 / std::sqrt(2.0 * M_PI);
        CHECK(std::abs(c - density_at_zero) / density_at_zero < 0.02);
    }

    SECTION("phase invariance and quadratic scaling") {
        WaveFunction u = gaussian_packet(grid, 1.0);
        const double base = coupling(b, u);
        WaveFunction rotated = u;
        for (cplx& v : rotated.values) v *= std::polar(1.0, 2.1);
        CHECK(coupling(b, rotated) == Catch::Approx(base).epsilon(1e-14));
        WaveFunction scaled = u;
        for (cplx& v : scaled.values) v *= cplx(1.5, -0.5);
        CHECK(coupling(b, scaled) == Catch::Approx(std::norm(cplx(1.5, -0.5)) * base).epsilon(1e-13));
    }
}

TEST_CASE("epsilon_of_N") {
    CHECK(epsilon_of_N(55) == Catch::Approx(1.0 / std::sqrt(std::log(55.0))).epsilon(1e-14));
    CHECK(epsilon_of_N(55) == Catch::Approx(0.4997).margin(5e-4));
    CHECK(epsilon_of_N(10) > epsilon_of_N(100));
    CHECK(epsilon_of_N(1000000) < epsilon_of_N(1000));
    CHECK_THROWS_AS(epsilon_of_N(1), ValidationError);
}

TEST_CASE("tabulated profiles") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "pointnls_profile_test.csv";

    SECTION("valid table loads and evaluates") {
        // triangle profile on [-1, 1], integral 1, even
        std::ofstream out(path);
        out << "x,w\n";
        for (int i = -20; i <= 20; ++i) {
            const double x = i / 20.0;
            out << x << "," << (1.0 - std::abs(x)) << "\n";
        }
        out.close();
        auto [xs, ws] = read_profile_csv(path);
        const BumpProfile p = BumpProfile::tabulated("triangle", xs, ws);
        CHECK(p(0.0) == Catch::Approx(1.0));
        CHECK(p(0.5) == Catch::Approx(0.5));
        CHECK(p(0.525) == Catch::Approx(0.475));  // linear interpolation
        CHECK(p(2.0) == 0.0);
        CHECK(p(-0.3) == Catch::Approx(p(0.3)));
        fs::remove(path);
    }

    SECTION("uneven table is rejected") {
        std::vector<double> xs, ws;
        for (int i = -20; i <= 20; ++i) {
            const double x = i / 20.0;
            xs.push_back(x);
            ws.push_back(1.0 - std::abs(x) + (x > 0 ? 1e-3 : 0.0));
        }
        CHECK_THROWS_AS(BumpProfile::tabulated("skew", xs, ws), ValidationError);
    }

    SECTION("non-unit integral is rejected") {
        std::vector<double> xs, ws;
        for (int i = -20; i <= 20; ++i) {
            const double x = i / 20.0;
            xs.push_back(x);
            ws.push_back(2.0 * (1.0 - std::abs(x)));
        }
        CHECK_THROWS_AS(BumpProfile::tabulated("double", xs, ws), ValidationError);
    }
}
