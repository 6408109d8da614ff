#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsul/field.hpp"

#include <cmath>

using namespace nsul;

TEST_CASE("grid validation rejects bad shapes") {
    CHECK_THROWS(GridSpec{7, 8, 1.0, 1.0}.validate());
    CHECK_THROWS(GridSpec{8, 8, -1.0, 1.0}.validate());
    CHECK_THROWS(GridSpec{8, 6, 1.0, 1.0}.validate());
    CHECK_NOTHROW(GridSpec{8, 8, 1.0, 2.0}.validate());
}

TEST_CASE("wavenumbers and signed modes") {
    GridSpec g{8, 8, 2.0 * M_PI, M_PI};
    CHECK(g.k1(0) == doctest::Approx(0.0));
    CHECK(g.k1(1) == doctest::Approx(1.0));
    CHECK(g.k1(7) == doctest::Approx(-1.0));
    CHECK(g.k2(1) == doctest::Approx(2.0));
    CHECK(GridSpec::signed_mode(4, 8) == 4);
    CHECK(GridSpec::signed_mode(5, 8) == -3);
}

TEST_CASE("wrap_delta folds into the half-open centered interval") {
    CHECK(wrap_delta(0.1, 0.9, 1.0) == doctest::Approx(0.2));
    CHECK(wrap_delta(0.9, 0.1, 1.0) == doctest::Approx(-0.2));
    CHECK(wrap_delta(3.0, 1.0, 8.0) == doctest::Approx(2.0));
}

TEST_CASE("scalar field statistics") {
    GridSpec g{8, 8, 2.0, 2.0};
    ScalarField f(g, 3.0);
    CHECK(f.mean() == doctest::Approx(3.0));
    CHECK(f.integral() == doctest::Approx(12.0));
    CHECK(f.l2_norm() == doctest::Approx(6.0));
    f(0, 0) = -10.0;
    CHECK(f.max_abs() == doctest::Approx(10.0));
    CHECK(f.finite());
    f(1, 1) = std::nan("");
    CHECK(!f.finite());
    CHECK_THROWS(f.require_finite("test"));
}

TEST_CASE("vector field norms include the constant part") {
    GridSpec g{8, 8, 1.0, 1.0};
    VectorField u(g);
    u.u_inf() = {3.0, 4.0};
    CHECK(u.max_norm() == doctest::Approx(5.0));
    CHECK(u.max_norm_fluctuation() == doctest::Approx(0.0));
    u.u1()(2, 2) = 1.0;
    CHECK(u.max_norm_fluctuation() == doctest::Approx(1.0));
}

TEST_CASE("hermitian defect detects asymmetry") {
    GridSpec g{8, 8, 1.0, 1.0};
    Spectrum s(g);
    s(1, 0) = {1.0, 2.0};
    s(7, 0) = {1.0, -2.0};
    CHECK(s.hermitian_defect() == doctest::Approx(0.0));
    s(7, 0) = {1.0, 2.0};
    CHECK(s.hermitian_defect() > 0.5);
}
