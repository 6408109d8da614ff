#include "nsul/pressure.hpp"

#include "nsul/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsul {

namespace {

constexpr double pi = std::numbers::pi;

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double dsmoothstep(double s) { return 30.0 * s * s * (1.0 + s * (-2.0 + s)); }

void require_div_free(const VectorField& u, const char* what) {
    if (relative_divergence(u) > 1e-8)
        throw std::invalid_argument(std::string(what) +
                                    ": input velocity is not divergence-free");
}

// exact circular convolution (midpoint sum over the torus) via the DFT
ScalarField circ_conv(const ScalarField& kernel, const ScalarField& f) {
    Spectrum a = to_spectral(kernel);
    Spectrum b = to_spectral(f);
    for (int i = 0; i < a.grid().size(); ++i) a[i] *= b[i];
    ScalarField out = to_physical(a);
    out *= kernel.grid().cell_area();
    return out;
}

// kernel sampled at the minimal-image displacement of every grid node
template <typename F>
ScalarField sample_kernel(const GridSpec& g, F&& f) {
    ScalarField k(g);
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double z2 = wrap_delta(g.x2(i2), 0.0, g.l2);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            double z1 = wrap_delta(g.x1(i1), 0.0, g.l1);
            k(i1, i2) = f(z1, z2);
        }
    }
    return k;
}

ScalarField total_component(const VectorField& u, int axis) {
    ScalarField c = (axis == 1) ? u.u1() : u.u2();
    double shift = u.u_inf()[axis - 1];
    if (shift != 0.0)
        for (int i = 0; i < c.grid().size(); ++i) c[i] += shift;
    return c;
}

int nearest_node(double x, double h, int n) {
    int i = static_cast<int>(std::lround(x / h)) % n;
    return i < 0 ? i + n : i;
}

// local L2 mass of the full velocity over the wrapped ball; allows radii up
// to min(l)/2 (diagnostic use — overlap of the wrapped ball is accepted)
double local_l2(const ScalarField& speed_sq, const Point& c, double radius) {
    const GridSpec& g = speed_sq.grid();
    double r2 = radius * radius;
    double s = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        double d2 = wrap_delta(g.x2(i2), c.x2, g.l2);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            double d1 = wrap_delta(g.x1(i1), c.x1, g.l1);
            if (d1 * d1 + d2 * d2 <= r2) s += speed_sq(i1, i2);
        }
    }
    return std::sqrt(s * g.cell_area());
}

}  // namespace

double CutoffProfile::chi(double rho) const {
    double half = 0.5 * scale;
    if (rho <= half) return 1.0;
    if (rho >= scale) return 0.0;
    return 1.0 - smoothstep((rho - half) / half);
}

double CutoffProfile::dchi(double rho) const {
    double half = 0.5 * scale;
    if (rho <= half || rho >= scale) return 0.0;
    return -dsmoothstep((rho - half) / half) / half;
}

double CutoffProfile::chi_at(double z1, double z2) const {
    return chi(std::sqrt(z1 * z1 + z2 * z2));
}

std::array<double, 2> CutoffProfile::grad_at(double z1, double z2) const {
    double rho = std::sqrt(z1 * z1 + z2 * z2);
    if (rho == 0.0) return {0.0, 0.0};
    double d = dchi(rho) / rho;
    return {d * z1, d * z2};
}

ScalarField pressure_spectral(const VectorField& u) {
    u.require_finite("pressure_spectral");
    require_div_free(u, "pressure_spectral");
    const GridSpec& g = u.grid();
    // products use the fluctuation only: the constant part drops out of
    // d_k d_l (u_k u_l) and the k=0 pressure mode is normalized away
    ScalarField t11 = dealiased_product(u.u1(), u.u1());
    ScalarField t12 = dealiased_product(u.u1(), u.u2());
    ScalarField t22 = dealiased_product(u.u2(), u.u2());
    Spectrum s11 = to_spectral(t11), s12 = to_spectral(t12), s22 = to_spectral(t22);
    Spectrum p(g);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0) continue;
            int i = g.index(m1, m2);
            // p_hat = -(k_k k_l / |k|^2) (u_k u_l)_hat
            p[i] = -(k1 * k1 * s11[i] + 2.0 * k1 * k2 * s12[i] + k2 * k2 * s22[i]) / kk;
        }
    }
    dealias(p);
    return to_physical(p);
}

ScalarField modified_pressure(const VectorField& u) {
    ScalarField q = pressure_spectral(u);
    ScalarField v1 = total_component(u, 1);
    ScalarField v2 = total_component(u, 2);
    for (int i = 0; i < q.grid().size(); ++i)
        q[i] += 0.5 * (v1[i] * v1[i] + v2[i] * v2[i]);
    return q;
}

ScalarField PressureDecomposition::total() const {
    ScalarField s = q1 + q2 + q3;
    for (int i = 0; i < s.grid().size(); ++i) s[i] += q0;
    return s;
}

double kernel_m(const CutoffProfile& c, int k, int l, double z1, double z2) {
    double rho2 = z1 * z1 + z2 * z2;
    if (rho2 == 0.0) return 0.0;
    double zk = (k == 1) ? z1 : z2;
    auto grad = c.grad_at(z1, z2);
    double dl = (l == 1) ? grad[0] : grad[1];
    double zdot = z1 * grad[0] + z2 * grad[1];
    double delta = (k == l) ? 1.0 : 0.0;
    return (2.0 * zk * dl - delta * zdot) / rho2;
}

double kernel_k(int k, int l, double z1, double z2) {
    double rho2 = z1 * z1 + z2 * z2;
    if (rho2 == 0.0) return 0.0;
    double zk = (k == 1) ? z1 : z2;
    double zl = (l == 1) ? z1 : z2;
    double delta = (k == l) ? 1.0 : 0.0;
    return (2.0 * zk * zl - rho2 * delta) / (rho2 * rho2);
}

PressureDecomposition q_decomposition(const VectorField& u, const ScalarField& omega,
                                      const Point& x0, const CutoffProfile& cutoff) {
    const GridSpec& g = u.grid();
    if (!g.same_mesh(omega.grid()))
        throw std::invalid_argument("q_decomposition: grid mismatch");
    if (cutoff.scale > std::min(g.l1, g.l2) / 8.0)
        throw std::invalid_argument("q_decomposition: cutoff.scale > min(l1,l2)/8");
    require_div_free(u, "q_decomposition");

    ScalarField v1 = total_component(u, 1);
    ScalarField v2 = total_component(u, 2);

    // q1: cut Biot-Savart kernel chi(z) z^perp / |z|^2 against u omega;
    // the 1/|z| singularity at z = 0 is handled by omitting that cell
    auto cut_perp = [&](int axis) {
        return sample_kernel(g, [&, axis](double z1, double z2) {
            double rho2 = z1 * z1 + z2 * z2;
            if (rho2 == 0.0) return 0.0;
            double comp = (axis == 1) ? -z2 : z1;
            return cutoff.chi_at(z1, z2) * comp / rho2;
        });
    };
    ScalarField q1 = circ_conv(cut_perp(1), pointwise(v1, omega));
    q1 += circ_conv(cut_perp(2), pointwise(v2, omega));
    q1 *= 1.0 / (2.0 * pi);

    ScalarField t11 = pointwise(v1, v1);
    ScalarField t12 = pointwise(v1, v2);
    ScalarField t22 = pointwise(v2, v2);

    auto m_kernel = [&](int k, int l) {
        return sample_kernel(
            g, [&, k, l](double z1, double z2) { return kernel_m(cutoff, k, l, z1, z2); });
    };
    ScalarField q2 = circ_conv(m_kernel(1, 1), t11);
    q2 += circ_conv(m_kernel(2, 2), t22);
    {
        ScalarField cross = circ_conv(m_kernel(1, 2), t12);
        cross *= 2.0;
        q2 += cross;
    }
    q2 *= 1.0 / (4.0 * pi);

    // Far field (1/2pi) conv((1-chi) K_kl, u_k u_l), split as the full
    // singular convolution minus the chi-cut near part. The full p.v.
    // convolution has Fourier symbol delta_kl/2 - k_k k_l/|k|^2, which is
    // exact on the torus; sampling (1-chi)K at the minimal image instead
    // would truncate the 1/|z|^2 tail at the cell boundary, an O(1)
    // periodization error that never converges under refinement. The
    // remaining chi K_kl piece is compactly supported in |z| <= scale, so
    // its midpoint sum is wrap-free and O(h^2).
    Spectrum s11 = to_spectral(t11), s12 = to_spectral(t12), s22 = to_spectral(t22);
    Spectrum far(g);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = k1 * k1 + k2 * k2;
            int i = g.index(m1, m2);
            far[i] = 0.5 * (s11[i] + s22[i]);
            if (kk > 0.0)
                far[i] -= (k1 * k1 * s11[i] + 2.0 * k1 * k2 * s12[i] +
                           k2 * k2 * s22[i]) / kk;
        }
    }
    ScalarField t = to_physical(far);
    auto near_kernel = [&](int k, int l) {
        return sample_kernel(g, [&, k, l](double z1, double z2) {
            return cutoff.chi_at(z1, z2) * kernel_k(k, l, z1, z2);
        });
    };
    ScalarField near = circ_conv(near_kernel(1, 1), t11);
    near += circ_conv(near_kernel(2, 2), t22);
    {
        ScalarField cross = circ_conv(near_kernel(1, 2), t12);
        cross *= 2.0;
        near += cross;
    }
    near *= 1.0 / (2.0 * pi);
    t -= near;

    PressureDecomposition d{ScalarField(g), ScalarField(g), ScalarField(g), 0.0, x0};
    int b1 = nearest_node(x0.x1, g.h1(), g.n1);
    int b2 = nearest_node(x0.x2, g.h2(), g.n2);
    double t0 = t(b1, b2);
    for (int i = 0; i < g.size(); ++i) t[i] -= t0;  // q3(x0, x0) = 0 exactly
    d.q1 = q1;
    d.q2 = q2;
    d.q3 = t;
    ScalarField q = modified_pressure(u);
    d.q0 = q(b1, b2) - q1(b1, b2) - q2(b1, b2);
    return d;
}

double q_flux_term(const VectorField& u, const ScalarField& q,
                   const LocalizationBump& bump) {
    const GridSpec& g = u.grid();
    if (!g.same_mesh(q.grid()))
        throw std::invalid_argument("q_flux_term: grid mismatch");
    bump.require_fits(g);
    double s = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) {
            auto grad = bump.grad_phi({g.x1(i1), g.x2(i2)}, g);
            if (grad[0] == 0.0 && grad[1] == 0.0) continue;
            double a = u.u1()(i1, i2) + u.u_inf()[0];
            double b = u.u2()(i1, i2) + u.u_inf()[1];
            s += q(i1, i2) * (a * grad[0] + b * grad[1]);
        }
    }
    return s * g.cell_area();
}

std::array<double, 3> q_flux_bound_terms(const VectorField& u, const ScalarField& omega,
                                         const LocalizationBump& bump, double r) {
    const GridSpec& g = u.grid();
    double R = bump.radius();
    if (!(r > 0.0) || r > R)
        throw std::invalid_argument("q_flux_bound_terms: need 0 < r <= R");
    ScalarField speed_sq(g);
    for (int i = 0; i < g.size(); ++i) {
        double a = u.u1()[i] + u.u_inf()[0];
        double b = u.u2()[i] + u.u_inf()[1];
        speed_sq[i] = a * a + b * b;
    }
    double half_min = 0.5 * std::min(g.l1, g.l2);
    double r3 = std::min(3.0 * R, half_min);
    double r2 = std::min(2.0 * R, half_min);
    double l2_3r = local_l2(speed_sq, bump.center(), r3);
    double sup_2r = 0.0;
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1)
            sup_2r = std::max(sup_2r, local_l2(speed_sq, {g.x1(i1), g.x2(i2)}, r2));
    double om = omega.max_abs();
    return {(r / R) * om * l2_3r * l2_3r,
            l2_3r * l2_3r * l2_3r / (r * R),
            sup_2r * sup_2r * sup_2r / (R * R)};
}

}  // namespace nsul
