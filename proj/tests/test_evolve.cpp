#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsul/evolve.hpp"
#include "nsul/initial_conditions.hpp"
#include "nsul/spectral.hpp"

#include <cmath>

using namespace nsul;

namespace {

GridSpec square(int n) { return GridSpec{n, n, 2.0 * M_PI, 2.0 * M_PI}; }

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (int i = 0; i < a.grid().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SolverState run_etd(SolverState s, SolverConfig cfg) {
    int steps = static_cast<int>(std::lround(cfg.t_end / cfg.dt));
    for (int i = 0; i < steps; ++i) vorticity_step(s, cfg);
    return s;
}

double lp_norm(const ScalarField& f, double p) {
    double s = 0.0;
    for (int i = 0; i < f.grid().size(); ++i) s += std::pow(std::abs(f[i]), p);
    return std::pow(s * f.grid().cell_area(), 1.0 / p);
}

}  // namespace

TEST_CASE("cellular flow decays by the viscous factor") {
    GridSpec g = square(64);
    SolverState s = make_state(taylor_green_velocity(g, 1.0));
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 1e-3;
    cfg.t_end = 0.2;
    s = run_etd(std::move(s), cfg);
    ScalarField expect = curl(taylor_green_velocity(g, 1.0));
    expect *= std::exp(-2.0 * cfg.nu * cfg.t_end);
    CHECK(max_diff(s.omega, expect) < 1e-9);
    CHECK(s.t == doctest::Approx(0.2));
}

TEST_CASE("rest state stays at rest") {
    GridSpec g = square(32);
    SolverState s(g);
    SolverConfig cfg;
    cfg.nu = 0.5;
    vorticity_step(s, cfg);
    CHECK(s.omega.max_abs() == 0.0);
    CHECK(s.u.max_norm() == 0.0);
}

TEST_CASE("vorticity obeys the maximum principle on a random field") {
    GridSpec g = square(64);
    ScalarField w0 = random_bandlimited_field(g, 1, 10, 1.0, 99);
    SolverState s = make_state_from_vorticity(w0, {0.0, 0.0});
    SolverConfig cfg;
    cfg.nu = 0.05;
    cfg.dt = 2e-3;
    double m0 = s.omega.max_abs();
    for (int i = 0; i < 100; ++i) {
        vorticity_step(s, cfg);
        CHECK(s.omega.max_abs() <= m0 * (1.0 + 1e-8));
    }
    // L^p norms of the vorticity are nonincreasing as well
    SolverState s2 = make_state_from_vorticity(w0, {0.0, 0.0});
    for (double p : {2.0, 4.0}) {
        double n0 = lp_norm(s2.omega, p);
        SolverState run = make_state_from_vorticity(w0, {0.0, 0.0});
        for (int i = 0; i < 50; ++i) vorticity_step(run, cfg);
        CHECK(lp_norm(run.omega, p) <= n0 * (1.0 + 1e-8));
    }
}

TEST_CASE("global energy ledger closes on the cellular flow") {
    GridSpec g = square(64);
    SolverState s = make_state(taylor_green_velocity(g, 1.0));
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 1e-3;
    EnergyLedger ledger;
    ledger.initialize(s, cfg);
    double e0 = ledger.initial_energy();
    CHECK(e0 == doctest::Approx(0.5 * M_PI * M_PI * 2.0));  // int |u|^2 = 2 pi^2
    for (int i = 0; i < 200; ++i) {
        SolverState prev = s;
        vorticity_step(s, cfg);
        ledger.update(prev, s, cfg);
    }
    CHECK(ledger.energy() == doctest::Approx(e0 * std::exp(-4.0 * cfg.nu * s.t)));
    CHECK(ledger.residual() < 1e-6);
}

TEST_CASE("localized energy balance residual is small on a smooth run") {
    GridSpec g = square(64);
    VectorField raw(g);
    raw.u1() = random_bandlimited_field(g, 1, 4, 0.5, 13);
    raw.u2() = random_bandlimited_field(g, 1, 4, 0.5, 14);
    SolverState s = make_state(leray_project(raw));
    SolverConfig cfg;
    cfg.nu = 0.2;
    cfg.dt = 1e-3;
    EnergyLedger ledger;
    ledger.register_bump(LocalizationBump({M_PI, M_PI}, 1.0));
    ledger.initialize(s, cfg);
    for (int i = 0; i < 50; ++i) {
        SolverState prev = s;
        vorticity_step(s, cfg);
        ledger.update(prev, s, cfg);
    }
    REQUIRE(ledger.local_residuals().size() == 1);
    CHECK(ledger.local_residuals()[0] < 1e-3);
}

TEST_CASE("advective stability limit is enforced") {
    GridSpec g = square(32);
    VectorField u = taylor_green_velocity(g, 1.0);
    u.u_inf() = {50.0, 0.0};
    SolverState s = make_state(u);
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 0.01;  // max|u| dt / h > 0.5
    CHECK_THROWS(vorticity_step(s, cfg));
}

TEST_CASE("a constant background velocity advects the pattern exactly") {
    GridSpec g = square(64);
    VectorField u0 = taylor_green_velocity(g, 1.0);
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = 1e-3;
    cfg.t_end = 0.1;
    SolverState still = run_etd(make_state(u0), cfg);
    VectorField moving = u0;
    moving.u_inf() = {g.h1() / cfg.dt * 0.4, 0.0};  // fast but within the CFL guard
    SolverState adv = run_etd(make_state(moving), cfg);
    // compare in the co-moving frame: shift back by u_inf * t via spectral phase
    Spectrum ws = to_spectral(adv.omega);
    double shift = moving.u_inf()[0] * adv.t;
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1);
            ws[g.index(m1, m2)] *= std::polar(1.0, k1 * shift);
        }
    }
    ScalarField back = to_physical(ws);
    CHECK(max_diff(back, still.omega) < 1e-8);
}

TEST_CASE("pure diffusion solver") {
    GridSpec g = square(32);
    ScalarField f = random_bandlimited_field(g, 1, 6, 1.0, 55);
    double m0 = f.max_abs();
    ScalarField out = heat_solve(f, 0.3, 2.0);
    CHECK(out.max_abs() <= m0);
    ScalarField c(g, 4.0);
    CHECK(max_diff(heat_solve(c, 0.3, 5.0), c) < 1e-12);
    CHECK_THROWS(heat_solve(f, 0.3, -1.0));
    // semigroup property
    ScalarField two = heat_solve(heat_solve(f, 0.3, 0.7), 0.3, 0.3);
    CHECK(max_diff(two, heat_solve(f, 0.3, 1.0)) < 1e-12);
}

TEST_CASE("fixed-point iteration reproduces special solutions") {
    GridSpec g = square(32);
    SolverConfig cfg;
    cfg.nu = 1.0;

    // a constant velocity is a fixed point of the Duhamel map
    VectorField c(g);
    c.u_inf() = {1.0, -2.0};
    PicardResult r = picard_local_solve(c, cfg, 0.1);
    CHECK(r.converged);
    VectorField last = r.u.back();
    CHECK(last.max_norm_fluctuation() < 1e-10);
    CHECK(last.u_inf()[0] == doctest::Approx(1.0));

    // cellular flow: nonlinearity is a pure gradient, solution is heat decay
    GridSpec g2 = square(64);
    SolverConfig cfg2;
    cfg2.nu = 0.5;
    PicardResult tg = picard_local_solve(taylor_green_velocity(g2, 1.0), cfg2, 0.15);
    CHECK(tg.converged);
    CHECK(tg.kappa_hat < 1.0);
    VectorField expect = taylor_green_velocity(g2, std::exp(-2.0 * cfg2.nu * 0.15));
    double err = 0.0;
    for (int i = 0; i < g2.size(); ++i) {
        err = std::max(err, std::abs(tg.u.back().u1()[i] - expect.u1()[i]));
        err = std::max(err, std::abs(tg.u.back().u2()[i] - expect.u2()[i]));
    }
    CHECK(err < 1e-6);

    // sweeps contract at least geometrically with rate kappa_hat
    for (size_t i = 1; i + 1 < tg.iterate_distances.size(); ++i) {
        if (tg.iterate_distances[i] < 1e-13) break;  // rounding floor
        CHECK(tg.iterate_distances[i + 1] <=
              std::max(tg.kappa_hat, 0.9) * tg.iterate_distances[i] + 1e-13);
    }

    // too long a horizon: refuse with advice rather than diverge
    VectorField big = taylor_green_velocity(g2, 50.0);
    CHECK_THROWS_WITH_AS(picard_local_solve(big, cfg2, 10.0),
                         doctest::Contains("shorten the horizon"), std::runtime_error);
}

TEST_CASE("short-time agreement between the two integrators") {
    GridSpec g = square(64);
    VectorField raw(g);
    raw.u1() = random_bandlimited_field(g, 1, 5, 0.3, 3);
    raw.u2() = random_bandlimited_field(g, 1, 5, 0.3, 4);
    VectorField u0 = leray_project(raw);
    SolverConfig cfg;
    cfg.nu = 0.5;
    cfg.dt = 5e-4;
    cfg.t_end = 0.05;
    cfg.picard_time_nodes = 100;
    cfg.picard_quad_nodes = 64;
    SolverState etd = run_etd(make_state(u0), cfg);
    PicardResult pic = picard_local_solve(u0, cfg, cfg.t_end);
    REQUIRE(pic.converged);
    const VectorField& up = pic.u.back();
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        err = std::max(err, std::abs(up.u1()[i] - etd.u.u1()[i]));
        err = std::max(err, std::abs(up.u2()[i] - etd.u.u2()[i]));
    }
    CHECK(err < 1e-5);
}

TEST_CASE("configuration validation") {
    SolverConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS(cfg.validate());
    cfg = SolverConfig{};
    cfg.nu = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg = SolverConfig{};
    CHECK_NOTHROW(cfg.validate());

    GridSpec g = square(16);
    VectorField bad(g);
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1) bad.u1()(i1, i2) = std::sin(g.x1(i1));
    CHECK_THROWS(make_state(bad));
    ScalarField w(g, 1.0);
    CHECK_THROWS(make_state_from_vorticity(w, {0.0, 0.0}));
}
