#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsul/bounds.hpp"
#include "nsul/initial_conditions.hpp"
#include "nsul/spectral.hpp"

#include <cmath>

using namespace nsul;

namespace {

Trajectory short_tg_run(int n, double nu, double dt, int steps, int stride) {
    GridSpec g{n, n, 2.0 * M_PI, 2.0 * M_PI};
    SolverState s = make_state(taylor_green_velocity(g, 1.0));
    SolverConfig cfg;
    cfg.nu = nu;
    cfg.dt = dt;
    Trajectory traj;
    traj.push_back(s);
    for (int i = 1; i <= steps; ++i) {
        vorticity_step(s, cfg);
        if (i % stride == 0) traj.push_back(s);
    }
    return traj;
}

std::vector<BoundRecord> named(const std::vector<BoundRecord>& rec, const std::string& n) {
    std::vector<BoundRecord> out;
    for (const auto& r : rec)
        if (r.name == n) out.push_back(r);
    return out;
}

}  // namespace

TEST_CASE("observation radius schedule") {
    CHECK(radius_schedule(0.0, 1.0, 2.0, 4.0) == doctest::Approx(0.5));  // R0
    CHECK(radius_schedule(4.0, 1.0, 1.0, 1.0) == doctest::Approx(16.0));
    CHECK_THROWS(radius_schedule(1.0, 1.0, 1.0, 0.0));
    // nondecreasing in t
    double prev = 0.0;
    for (double t = 0.0; t <= 5.0; t += 0.25) {
        double r = radius_schedule(t, 0.1, 1.0, 2.0);
        CHECK(r >= prev);
        prev = r;
    }
    // doubling ||u0|| and halving ||w0|| scales R0 by 4
    CHECK(radius_schedule(0.0, 1.0, 2.0, 0.5) ==
          doctest::Approx(4.0 * radius_schedule(0.0, 1.0, 1.0, 1.0)));
    // c7 scales the time-dependent branches
    CHECK(radius_schedule(4.0, 1.0, 1.0, 1.0, 2.0) == doctest::Approx(32.0));
}

TEST_CASE("growth monitors on a decaying run") {
    Trajectory traj = short_tg_run(64, 0.1, 1e-3, 200, 50);

    auto thm1 = monitor_thm1(traj);
    REQUIRE(thm1.size() == traj.size());
    CHECK(thm1.front().ratio == doctest::Approx(1.0));
    for (size_t i = 1; i < thm1.size(); ++i) {
        CHECK(std::isfinite(thm1[i].ratio));
        CHECK(thm1[i].ratio <= thm1[i - 1].ratio + 1e-12);  // decay under growth shape
        CHECK(thm1[i].ratio <= 1.0 + 1e-12);
    }

    auto rec2 = monitor_thm2(traj, 0.1);
    auto thm2 = named(rec2, "thm2");
    auto refined = named(rec2, "thm2_refined");
    REQUIRE(thm2.size() == traj.size());
    REQUIRE(refined.size() == traj.size());
    for (size_t i = 0; i < thm2.size(); ++i) {
        CHECK(thm2[i].ratio <= 1.0 + 1e-12);
        CHECK(refined[i].ratio <= thm2[i].ratio + 1e-12);  // bigger shape, smaller ratio
    }

    auto ule = monitor_ul_energy(traj, 0.1);
    for (const auto& r : ule) {
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
        CHECK(!r.saturated);  // short horizon keeps R inside the torus
    }

    auto ens = monitor_enstrophy(traj, 0.1);
    auto e = named(ens, "enstrophy");
    auto en = named(ens, "enstrophy_norm");
    REQUIRE(e.size() == traj.size() - 1);  // t = 0 skipped (shape blows up)
    REQUIRE(en.size() == e.size());
    for (const auto& r : e) CHECK(std::isfinite(r.ratio));
    for (const auto& r : en) CHECK(std::isfinite(r.ratio));
}

TEST_CASE("saturation flags once the radius outgrows the torus") {
    Trajectory traj = short_tg_run(32, 0.1, 1e-3, 10, 5);
    traj.back().t = 1000.0;  // schedule radius far beyond min(l)/4
    auto ule = monitor_ul_energy(traj, 0.1);
    CHECK(!ule.front().saturated);
    CHECK(ule.back().saturated);
    // fits skip saturated entries
    ConstantFit fit = ConstantFit::from_records("C6", ule, "tg", "32x32");
    for (const auto& r : ule)
        if (!r.saturated) CHECK(fit.value >= r.ratio);
    ConstantFit other = fit;
    other.value *= 2.0;
    fit.absorb(other);
    CHECK(fit.value == doctest::Approx(other.value));
}

TEST_CASE("strip-domain monitor requires a strip") {
    Trajectory sq = short_tg_run(32, 0.1, 1e-3, 4, 2);
    CHECK_THROWS(monitor_thm3(sq, 0.1));

    GridSpec strip{128, 32, 8.0 * M_PI, 2.0 * M_PI};
    SolverState s = make_state(taylor_green_velocity(strip, 1.0));
    SolverConfig cfg;
    cfg.nu = 0.5;
    cfg.dt = 1e-3;
    Trajectory traj{s};
    for (int i = 0; i < 20; ++i) vorticity_step(s, cfg);
    traj.push_back(s);
    auto rec = monitor_thm3(traj, cfg.nu);
    REQUIRE(rec.size() == 2);
    for (const auto& r : rec) {
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
    }
}

TEST_CASE("integral comparison lemma self-test") {
    // saturating exponential: f = a e^{Bt}, b = B, g = 0 gives equality in
    // the conclusion, and a convex overshoot keeps the hypothesis discrete
    double a = 2.0, B = 1.0, dt = 1e-3;
    std::vector<double> t, f, g, b;
    for (double s = 0.0; s <= 1.0 + 1e-12; s += dt) {
        t.push_back(s);
        f.push_back(a * std::exp(B * s));
        g.push_back(0.0);
        b.push_back(B);
    }
    GronwallReport rep = gronwall_check(t, f, g, b, a);
    CHECK(rep.hypothesis_holds);
    CHECK(rep.conclusion_holds);
    CHECK(std::abs(rep.worst_conclusion_margin) <= 1e-8);

    // trivial case: constant under its ceiling
    std::vector<double> fc(t.size(), 1.0), zero(t.size(), 0.0);
    GronwallReport triv = gronwall_check(t, fc, zero, zero, 1.5);
    CHECK(triv.hypothesis_holds);
    CHECK(triv.conclusion_holds);

    // violation is reported, never (G2) without (G1)
    std::vector<double> fbad = f;
    for (auto& v : fbad) v *= 1.1;
    GronwallReport bad = gronwall_check(t, fbad, g, b, a);
    CHECK(!bad.hypothesis_holds);
    CHECK(bad.worst_hypothesis_margin > 0.0);

    std::vector<double> shorter(t.size() - 1, 0.0);
    CHECK_THROWS(gronwall_check(t, fc, shorter, b, 1.0));
}

TEST_CASE("pure-diffusion estimates") {
    GridSpec g{64, 64, 2.0 * M_PI, 2.0 * M_PI};
    double nu = 0.2;

    // constant data: both sides computable by hand
    std::vector<HeatSample> flat;
    for (double t : {0.0, 0.5, 1.0}) flat.push_back({t, ScalarField(g, 1.0)});
    auto rec = monitor_heat_ul(flat, nu, 1.0);
    auto he = named(rec, "heat_exp");
    auto hb = named(rec, "heat_ball");
    REQUIRE(he.size() == 3);
    CHECK(he.front().ratio == doctest::Approx(1.0));
    for (const auto& r : he) CHECK(r.ratio <= 1.0 + 1e-10);
    for (const auto& r : hb) CHECK(r.ratio == doctest::Approx(hb.front().ratio).epsilon(0.1));

    // random data under the diffusion semigroup: pathwise with unit constant
    ScalarField u0 = random_bandlimited_field(g, 1, 8, 1.0, 23);
    std::vector<HeatSample> traj;
    for (double t : {0.0, 0.1, 0.3, 0.6, 1.0})
        traj.push_back({t, heat_solve(u0, nu, t)});
    auto rec2 = monitor_heat_ul(traj, nu, 1.0);
    for (const auto& r : named(rec2, "heat_exp")) CHECK(r.ratio <= 1.0 + 1e-6);
    for (const auto& r : named(rec2, "heat_ball")) {
        CHECK(std::isfinite(r.ratio));
        CHECK(!r.saturated);
    }

    CHECK_THROWS(monitor_heat_ul({}, nu, 1.0));
    CHECK_THROWS(monitor_heat_ul(flat, nu, -1.0));
}
