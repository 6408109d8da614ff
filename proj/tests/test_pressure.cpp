#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsul/initial_conditions.hpp"
#include "nsul/pressure.hpp"
#include "nsul/spectral.hpp"

#include <cmath>

using namespace nsul;

namespace {

GridSpec square(int n) { return GridSpec{n, n, 2.0 * M_PI, 2.0 * M_PI}; }

double rel_linf(const ScalarField& a, const ScalarField& b) {
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < a.grid().size(); ++i) {
        err = std::max(err, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(b[i]));
    }
    return err / std::max(scale, 1e-300);
}

double qdecomp_error(int n) {
    GridSpec g = square(n);
    VectorField u = taylor_green_velocity(g, 1.0);
    ScalarField w = curl(u);
    CutoffProfile cut{std::min(g.l1, g.l2) / 8.0};
    Point x0{0.5 * g.l1, 0.5 * g.l2};
    PressureDecomposition d = q_decomposition(u, w, x0, cut);
    return rel_linf(d.total(), modified_pressure(u));
}

}  // namespace

TEST_CASE("cellular-flow pressure has the classical closed form") {
    GridSpec g = square(64);
    VectorField u = taylor_green_velocity(g, 1.0);
    ScalarField p = pressure_spectral(u);
    ScalarField expect(g);
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1)
            expect(i1, i2) = 0.25 * (std::cos(2.0 * g.x1(i1)) + std::cos(2.0 * g.x2(i2)));
    CHECK(rel_linf(p, expect) < 1e-12);
    CHECK(std::abs(p.mean()) < 1e-12);
}

TEST_CASE("degenerate flows produce zero pressure") {
    GridSpec g = square(32);
    VectorField c(g);
    c.u_inf() = {2.0, -1.0};
    CHECK(pressure_spectral(c).max_abs() < 1e-12);
    VectorField s = shear_velocity(g, 1.5);
    CHECK(pressure_spectral(s).max_abs() < 1e-12);
    // Bernoulli head of the shear is the local kinetic energy
    ScalarField q = modified_pressure(s);
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(q[i] - 0.5 * s.u1()[i] * s.u1()[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("pressure solves its Poisson equation to spectral accuracy") {
    GridSpec g = square(64);
    VectorField raw(g);
    raw.u1() = random_bandlimited_field(g, 1, 8, 1.0, 31);
    raw.u2() = random_bandlimited_field(g, 1, 8, 1.0, 32);
    VectorField u = leray_project(raw);
    ScalarField p = pressure_spectral(u);
    Spectrum ps = to_spectral(p);
    Spectrum lap = derivative(ps, 1, 2);
    Spectrum lap2 = derivative(ps, 2, 2);
    for (int i = 0; i < g.size(); ++i) lap[i] += lap2[i];
    // div((u.grad)u) = d_k d_l (u_k u_l)
    Spectrum t11 = to_spectral(dealiased_product(u.u1(), u.u1()));
    Spectrum t12 = to_spectral(dealiased_product(u.u1(), u.u2()));
    Spectrum t22 = to_spectral(dealiased_product(u.u2(), u.u2()));
    Spectrum rhs(g);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            int i = g.index(m1, m2);
            rhs[i] = -(k1 * k1 * t11[i] + 2.0 * k1 * k2 * t12[i] + k2 * k2 * t22[i]);
        }
    }
    dealias(rhs);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        err = std::max(err, std::abs(-lap[i] - rhs[i]));
        scale = std::max(scale, std::abs(rhs[i]));
    }
    CHECK(err / scale < 1e-9);

    VectorField bad(g);
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1) bad.u1()(i1, i2) = std::sin(g.x1(i1));
    CHECK_THROWS(pressure_spectral(bad));
}

TEST_CASE("far-field kernel is symmetric and trace-free") {
    for (double z1 : {0.3, -1.2, 2.0}) {
        for (double z2 : {0.7, -0.4}) {
            CHECK(kernel_k(1, 2, z1, z2) == doctest::Approx(kernel_k(2, 1, z1, z2)));
            CHECK(kernel_k(1, 1, z1, z2) + kernel_k(2, 2, z1, z2) ==
                  doctest::Approx(0.0));
        }
    }
    CutoffProfile cut{1.0};
    // the annulus kernel vanishes where the cutoff is flat
    CHECK(kernel_m(cut, 1, 1, 0.2, 0.1) == doctest::Approx(0.0));
    CHECK(kernel_m(cut, 1, 2, 1.5, 0.0) == doctest::Approx(0.0));
    CHECK(std::abs(kernel_m(cut, 1, 1, 0.7, 0.0)) > 0.0);
    CHECK(kernel_m(cut, 1, 2, 0.5, 0.5) == doctest::Approx(kernel_m(cut, 2, 1, 0.5, 0.5)));
}

TEST_CASE("cutoff profile shape") {
    CutoffProfile cut{2.0};
    CHECK(cut.chi(0.0) == doctest::Approx(1.0));
    CHECK(cut.chi(1.0) == doctest::Approx(1.0));
    CHECK(cut.chi(2.0) == doctest::Approx(0.0));
    CHECK(cut.chi(1.5) > 0.0);
    CHECK(cut.chi(1.5) < 1.0);
    // finite slope, zero outside the annulus
    CHECK(cut.dchi(0.5) == doctest::Approx(0.0));
    CHECK(cut.dchi(1.5) < 0.0);
    auto grad = cut.grad_at(1.5, 0.0);
    CHECK(grad[0] == doctest::Approx(cut.dchi(1.5)));
    CHECK(grad[1] == doctest::Approx(0.0));
}

TEST_CASE("decomposition of a constant flow collapses to its Bernoulli head") {
    GridSpec g = square(32);
    VectorField u(g);
    u.u_inf() = {2.0, 1.0};
    ScalarField w(g);  // zero vorticity
    CutoffProfile cut{std::min(g.l1, g.l2) / 8.0};
    PressureDecomposition d = q_decomposition(u, w, {1.0, 1.0}, cut);
    CHECK(d.q1.max_abs() < 1e-12);
    ScalarField total = d.total();
    for (int i = 0; i < g.size(); ++i)
        CHECK(total[i] == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("decomposition anchors exactly at the base point and refines") {
    GridSpec g = square(64);
    VectorField u = taylor_green_velocity(g, 1.0);
    ScalarField w = curl(u);
    CutoffProfile cut{std::min(g.l1, g.l2) / 8.0};
    Point x0{0.5 * g.l1, 0.5 * g.l2};
    PressureDecomposition d = q_decomposition(u, w, x0, cut);
    CHECK(d.q3(g.n1 / 2, g.n2 / 2) == 0.0);  // q3(x0,x0) = 0 by construction
    ScalarField total = d.total();
    ScalarField q = modified_pressure(u);
    CHECK(total(g.n1 / 2, g.n2 / 2) == doctest::Approx(q(g.n1 / 2, g.n2 / 2)));

    double e64 = qdecomp_error(64);
    double e128 = qdecomp_error(128);
    CHECK(e64 < 0.25);
    CHECK(e128 < e64);

    CutoffProfile big{g.l1};
    CHECK_THROWS(q_decomposition(u, w, x0, big));
}

TEST_CASE("localized pressure flux") {
    GridSpec g = square(64);
    VectorField c(g);
    c.u_inf() = {1.0, 2.0};
    ScalarField qc = modified_pressure(c);
    LocalizationBump bump({0.5 * g.l1, 0.5 * g.l2}, g.l1 / 8.0);
    CHECK(std::abs(q_flux_term(c, qc, bump)) < 1e-12);

    VectorField u = taylor_green_velocity(g, 1.0);
    ScalarField q = modified_pressure(u);
    double got = q_flux_term(u, q, bump);
    // direct midpoint oracle
    double oracle = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) {
            auto grad = bump.grad_phi({g.x1(i1), g.x2(i2)}, g);
            oracle += q(i1, i2) * (u.u1()(i1, i2) * grad[0] + u.u2()(i1, i2) * grad[1]);
        }
    }
    oracle *= g.cell_area();
    CHECK(got == doctest::Approx(oracle).epsilon(1e-8));

    LocalizationBump huge({0.5 * g.l1, 0.5 * g.l2}, g.l1);
    CHECK_THROWS(q_flux_term(u, q, huge));

    // the structural bound terms are positive and finite for r <= R
    auto terms = q_flux_bound_terms(u, curl(u), bump, bump.radius() / 2.0);
    for (double t : terms) {
        CHECK(t > 0.0);
        CHECK(std::isfinite(t));
    }
    CHECK_THROWS(q_flux_bound_terms(u, curl(u), bump, 2.0 * bump.radius()));
}
