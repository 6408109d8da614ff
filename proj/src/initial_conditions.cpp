#include "nsul/initial_conditions.hpp"

#include "nsul/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nsul {

VectorField taylor_green_velocity(const GridSpec& g, double amplitude) {
    VectorField u(g);
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) {
            double x = g.x1(i1), y = g.x2(i2);
            u.u1()(i1, i2) = amplitude * std::sin(x) * std::cos(y);
            u.u2()(i1, i2) = -amplitude * std::cos(x) * std::sin(y);
        }
    }
    return u;
}

ScalarField lamb_oseen_vorticity(const GridSpec& g, double amplitude, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("lamb_oseen_vorticity: sigma must be positive");
    ScalarField w(g);
    Point c{0.5 * g.l1, 0.5 * g.l2};
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) {
            Point d = wrap_delta({g.x1(i1), g.x2(i2)}, c, g);
            double r2 = d.x1 * d.x1 + d.x2 * d.x2;
            w(i1, i2) = amplitude * std::exp(-r2 / (4.0 * sigma));
        }
    }
    double m = w.mean();
    for (int i = 0; i < g.size(); ++i) w[i] -= m;
    return w;
}

ScalarField random_bandlimited_field(const GridSpec& g, int kmin, int kmax,
                                     double amplitude, std::uint64_t seed) {
    if (kmin < 1 || kmax < kmin)
        throw std::invalid_argument("random_bandlimited_field: need 1 <= kmin <= kmax");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Spectrum s(g);
    int lo = kmin * kmin, hi = kmax * kmax;
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            int a1 = std::abs(g.signed_mode(m1, g.n1));
            int a2 = std::abs(g.signed_mode(m2, g.n2));
            int mag = a1 * a1 + a2 * a2;
            if (mag < lo || mag > hi) continue;
            s(m1, m2) = {gauss(rng), gauss(rng)};
        }
    }
    // symmetrize through physical space, then normalize
    ScalarField f = to_physical(s);
    double m = f.mean();
    for (int i = 0; i < g.size(); ++i) f[i] -= m;
    double peak = f.max_abs();
    if (peak > 0.0) f *= amplitude / peak;
    return f;
}

VectorField shear_velocity(const GridSpec& g, double amplitude) {
    VectorField u(g);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double v = amplitude * std::sin(two_pi * g.x2(i2) / g.l2);
        for (int i1 = 0; i1 < g.n1; ++i1) u.u1()(i1, i2) = v;
    }
    return u;
}

SolverState build_initial_state(const InitialConditionSpec& spec, const GridSpec& g,
                                const Vec2& u_inf) {
    if (spec.family == "constant") {
        VectorField u(g);
        u.u_inf() = {u_inf[0] + spec.u1, u_inf[1] + spec.u2};
        return make_state(u);
    }
    if (spec.family == "shear") {
        VectorField u = shear_velocity(g, spec.amplitude);
        u.u_inf() = u_inf;
        return make_state(u);
    }
    if (spec.family == "taylor_green") {
        VectorField u = taylor_green_velocity(g, spec.amplitude);
        u.u_inf() = u_inf;
        return make_state(u);
    }
    if (spec.family == "lamb_oseen") {
        ScalarField w = lamb_oseen_vorticity(g, spec.circulation, spec.sigma);
        return make_state_from_vorticity(w, u_inf);
    }
    if (spec.family == "random_bandlimited") {
        ScalarField w = random_bandlimited_field(g, spec.kmin, spec.kmax,
                                                 spec.amplitude, spec.seed);
        return make_state_from_vorticity(w, u_inf);
    }
    throw std::invalid_argument("build_initial_state: unknown family '" + spec.family +
                                "'");
}

}  // namespace nsul
