#include "nsul/biot_savart.hpp"

#include "nsul/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsul {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

inline Vec2 perp_over_sq(double z1, double z2) {
    double r2 = z1 * z1 + z2 * z2;
    return {-z2 / r2, z1 / r2};
}

inline bool in_cell(double d1, double d2, const GridSpec& g) {
    return std::abs(d1) <= 0.5 * g.h1() && std::abs(d2) <= 0.5 * g.h2();
}

}  // namespace

VectorField velocity_from_vorticity(const ScalarField& omega, const Vec2& u_inf) {
    omega.require_finite("velocity_from_vorticity");
    double m = std::abs(omega.mean());
    double scale = omega.max_abs();
    if (scale > 0.0 && m > 1e-10 * scale)
        throw std::invalid_argument(
            "velocity_from_vorticity: vorticity must have zero mean on the "
            "periodic domain (torus Biot-Savart constraint)");
    const GridSpec& g = omega.grid();
    Spectrum w = to_spectral(omega);
    Spectrum s1(g), s2(g);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0 || m1 == g.n1 / 2 || m2 == g.n2 / 2) continue;
            // u_hat = -i k^perp / |k|^2 omega_hat, k^perp = (-k2, k1)
            auto c = w(m1, m2) / kk;
            s1(m1, m2) = std::complex<double>(0.0, 1.0) * k2 * c;
            s2(m1, m2) = std::complex<double>(0.0, -1.0) * k1 * c;
        }
    }
    VectorField u(g);
    u.u1() = to_physical(s1);
    u.u2() = to_physical(s2);
    u.u_inf() = u_inf;
    return u;
}

Vec2 bs_kernel_f(const Point& x, const Point& y, const Point& base) {
    double d1 = x.x1 - y.x1, d2 = x.x2 - y.x2;
    double b1 = y.x1 - base.x1, b2 = y.x2 - base.x2;
    if ((d1 == 0.0 && d2 == 0.0) || (b1 == 0.0 && b2 == 0.0))
        throw std::invalid_argument("bs_kernel_f: singular at y = x or y = base");
    Vec2 a = perp_over_sq(d1, d2);
    Vec2 b = perp_over_sq(b1, b2);
    return {a[0] + b[0], a[1] + b[1]};
}

Vec2 bs_kernel_g(const Point& x, const Point& y, const Point& base) {
    double x1 = x.x1 - base.x1, x2 = x.x2 - base.x2;
    double z1 = y.x1 - base.x1, z2 = y.x2 - base.x2;
    Vec2 a = perp_over_sq(x1 - z1, x2 - z2);
    Vec2 b = perp_over_sq(x1 + z1, x2 + z2);
    Vec2 c = perp_over_sq(z1, z2);
    return {a[0] - b[0] + 2.0 * c[0], a[1] - b[1] + 2.0 * c[1]};
}

Point domain_center(const GridSpec& g) { return {0.5 * g.l1, 0.5 * g.l2}; }

Vec2 bs_weak(const ScalarField& omega, const Point& x, const Point& base) {
    const GridSpec& g = omega.grid();
    double xb1 = wrap_delta(x.x1, base.x1, g.l1);
    double xb2 = wrap_delta(x.x2, base.x2, g.l2);
    if (xb1 == 0.0 && xb2 == 0.0) return {0.0, 0.0};
    double area = g.cell_area();
    double s1 = 0.0, s2 = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double z2 = wrap_delta(g.x2(i2), base.x2, g.l2);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            double z1 = wrap_delta(g.x1(i1), base.x1, g.l1);
            double d1 = xb1 - z1, d2 = xb2 - z2;
            if (in_cell(d1, d2, g) || in_cell(z1, z2, g)) continue;
            Vec2 a = perp_over_sq(d1, d2);
            Vec2 b = perp_over_sq(z1, z2);
            double w = omega(i1, i2) * area;
            s1 += (a[0] + b[0]) * w;
            s2 += (a[1] + b[1]) * w;
        }
    }
    return {s1 / two_pi, s2 / two_pi};
}

Vec2 bs_truncated(const ScalarField& omega, const Point& x, double radius,
                  const Point& base) {
    const GridSpec& g = omega.grid();
    if (radius > 0.25 * std::min(g.l1, g.l2))
        throw std::invalid_argument(
            "bs_truncated: radius exceeds min(l1,l2)/4 (torus proxy limit)");
    double xb1 = wrap_delta(x.x1, base.x1, g.l1);
    double xb2 = wrap_delta(x.x2, base.x2, g.l2);
    double area = g.cell_area();
    double r2 = radius * radius;
    double s1 = 0.0, s2 = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double z2 = wrap_delta(g.x2(i2), base.x2, g.l2);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            double z1 = wrap_delta(g.x1(i1), base.x1, g.l1);
            if (z1 * z1 + z2 * z2 > r2) continue;
            double d1 = xb1 - z1, d2 = xb2 - z2;
            if (in_cell(d1, d2, g) || in_cell(z1, z2, g)) continue;
            Vec2 a = perp_over_sq(d1, d2);
            Vec2 b = perp_over_sq(z1, z2);
            double w = omega(i1, i2) * area;
            s1 += (a[0] + b[0]) * w;
            s2 += (a[1] + b[1]) * w;
        }
    }
    return {s1 / two_pi, s2 / two_pi};
}

Vec2 bs_truncated(const ScalarField& omega, const Point& x, double radius) {
    return bs_truncated(omega, x, radius, domain_center(omega.grid()));
}

Vec2 symmetrized_difference(const ScalarField& omega, const Point& x) {
    const GridSpec& g = omega.grid();
    Point c = domain_center(g);
    double x1 = x.x1, x2 = x.x2;
    if (x1 == 0.0 && x2 == 0.0) return {0.0, 0.0};
    double area = g.cell_area();
    double s1 = 0.0, s2 = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double z2 = wrap_delta(g.x2(i2), c.x2, g.l2);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            double z1 = wrap_delta(g.x1(i1), c.x1, g.l1);
            if (in_cell(z1, z2, g) || in_cell(x1 - z1, x2 - z2, g) ||
                in_cell(x1 + z1, x2 + z2, g))
                continue;
            Vec2 a = perp_over_sq(x1 - z1, x2 - z2);
            Vec2 b = perp_over_sq(x1 + z1, x2 + z2);
            Vec2 e = perp_over_sq(z1, z2);
            double w = omega(i1, i2) * area;
            s1 += (a[0] - b[0] + 2.0 * e[0]) * w;
            s2 += (a[1] - b[1] + 2.0 * e[1]) * w;
        }
    }
    return {s1 / two_pi, s2 / two_pi};
}

double TruncationStudy::convergence_order() const {
    // slope of log(err) against log(1/R)
    size_t n = radii.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double e1 = values[i][0] - reference[0];
        double e2 = values[i][1] - reference[1];
        double err = std::sqrt(e1 * e1 + e2 * e2);
        double lx = std::log(1.0 / radii[i]);
        double ly = std::log(std::max(err, 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

TruncationStudy truncation_study(const ScalarField& omega, const Point& x,
                                 const std::vector<double>& radii) {
    for (size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("truncation_study: radii must increase");
    TruncationStudy st;
    st.radii = radii;
    Point base = domain_center(omega.grid());
    VectorField u = velocity_from_vorticity(omega, {0.0, 0.0});
    // spectral reference u(x) - u(base), sampled at the nearest grid nodes
    const GridSpec& g = omega.grid();
    auto sample = [&](const Point& p) -> Vec2 {
        int i1 = static_cast<int>(std::lround(p.x1 / g.h1())) % g.n1;
        int i2 = static_cast<int>(std::lround(p.x2 / g.h2())) % g.n2;
        if (i1 < 0) i1 += g.n1;
        if (i2 < 0) i2 += g.n2;
        return {u.u1()(i1, i2), u.u2()(i1, i2)};
    };
    Vec2 ux = sample(x);
    Vec2 ub = sample(base);
    st.reference = {ux[0] - ub[0], ux[1] - ub[1]};
    for (double r : radii)
        st.values.push_back(bs_truncated(omega, x, r, base));
    return st;
}

}  // namespace nsul
