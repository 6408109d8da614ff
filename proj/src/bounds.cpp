#include "nsul/bounds.hpp"

#include "nsul/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsul {

namespace {

void require_traj(const Trajectory& traj, const char* what) {
    if (traj.empty()) throw std::invalid_argument(std::string(what) + ": empty trajectory");
}

// sup over grid centers of the L2 mass of a scalar field on wrapped balls
double sup_local_l2(const ScalarField& f, double radius) {
    const GridSpec& g = f.grid();
    int m1 = static_cast<int>(std::floor(radius / g.h1()));
    int m2 = static_cast<int>(std::floor(radius / g.h2()));
    std::vector<std::pair<int, int>> offsets;
    double r2 = radius * radius;
    for (int d2 = -m2; d2 <= m2; ++d2)
        for (int d1 = -m1; d1 <= m1; ++d1)
            if (d1 * g.h1() * d1 * g.h1() + d2 * g.h2() * d2 * g.h2() <= r2)
                offsets.emplace_back(d1, d2);
    double best = 0.0;
    for (int c2 = 0; c2 < g.n2; ++c2) {
        for (int c1 = 0; c1 < g.n1; ++c1) {
            double s = 0.0;
            for (auto [d1, d2] : offsets) {
                int i1 = c1 + d1, i2 = c2 + d2;
                i1 -= g.n1 * ((i1 >= g.n1) - (i1 < 0));
                i2 -= g.n2 * ((i2 >= g.n2) - (i2 < 0));
                double v = f(i1, i2);
                s += v * v;
            }
            best = std::max(best, s);
        }
    }
    return std::sqrt(best * g.cell_area());
}

double clip_radius(const GridSpec& g, double r, bool& saturated) {
    double limit = 0.25 * std::min(g.l1, g.l2);
    if (r > limit) {
        saturated = true;
        return limit;
    }
    return r;
}

BoundRecord make_record(std::string name, double t, double lhs, double rhs,
                        bool saturated = false) {
    BoundRecord r;
    r.name = std::move(name);
    r.t = t;
    r.lhs = lhs;
    r.rhs_shape = rhs;
    r.ratio = (rhs != 0.0) ? lhs / rhs : 0.0;
    r.saturated = saturated;
    return r;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y, size_t upto) {
    double s = 0.0;
    for (size_t i = 1; i <= upto; ++i)
        s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

}  // namespace

ConstantFit ConstantFit::from_records(const std::string& name,
                                      const std::vector<BoundRecord>& records,
                                      const std::string& ensemble,
                                      const std::string& resolution) {
    ConstantFit fit;
    fit.name = name;
    fit.ensemble = ensemble;
    fit.resolution = resolution;
    for (const auto& r : records)
        if (!r.saturated) fit.value = std::max(fit.value, r.ratio);
    return fit;
}

void ConstantFit::absorb(const ConstantFit& other) {
    value = std::max(value, other.value);
}

double radius_schedule(double t, double nu, double u0_inf_norm,
                       double omega0_inf_norm, double c7) {
    if (!(omega0_inf_norm > 0.0))
        throw std::invalid_argument(
            "radius_schedule: initial vorticity norm must be positive");
    double r0 = u0_inf_norm / omega0_inf_norm;
    double diff = c7 * std::sqrt(nu * t);
    double adv = c7 * u0_inf_norm * omega0_inf_norm * t * t;
    return std::max({r0, diff, adv});
}

std::vector<BoundRecord> monitor_thm1(const Trajectory& traj) {
    require_traj(traj, "monitor_thm1");
    double u0 = traj.front().u.max_norm();
    double w0 = traj.front().omega.max_abs();
    double t0 = traj.front().t;
    std::vector<BoundRecord> out;
    for (const auto& st : traj)
        out.push_back(make_record("thm1", st.t, st.u.max_norm(),
                                  u0 * std::exp(w0 * (st.t - t0))));
    return out;
}

std::vector<BoundRecord> monitor_thm2(const Trajectory& traj, double nu) {
    require_traj(traj, "monitor_thm2");
    double u0 = traj.front().u.max_norm();
    double w0 = traj.front().omega.max_abs();
    double t0 = traj.front().t;
    double r0 = (w0 > 0.0) ? u0 / w0 : 0.0;
    std::vector<BoundRecord> out;
    for (const auto& st : traj) {
        double t = st.t - t0;
        double lhs = st.u.max_norm();
        out.push_back(make_record("thm2", st.t, lhs, u0 * (1.0 + w0 * t)));
        if (r0 > 0.0) {
            double refined =
                u0 * (1.0 + w0 * t + std::sqrt(std::sqrt(nu * t) / r0));
            out.push_back(make_record("thm2_refined", st.t, lhs, refined));
        }
    }
    return out;
}

std::vector<BoundRecord> monitor_ul_energy(const Trajectory& traj, double nu, double c7) {
    require_traj(traj, "monitor_ul_energy");
    const GridSpec& g = traj.front().u.grid();
    double u0 = traj.front().u.max_norm();
    double w0 = traj.front().omega.max_abs();
    double t0 = traj.front().t;
    std::vector<BoundRecord> out;
    for (const auto& st : traj) {
        bool saturated = false;
        double r = radius_schedule(st.t - t0, nu, u0, w0, c7);
        r = clip_radius(g, r, saturated);
        double lhs = z_r(st.u, r);
        out.push_back(make_record("ul_energy", st.t, lhs, r * u0, saturated));
    }
    return out;
}

std::vector<BoundRecord> monitor_enstrophy(const Trajectory& traj, double nu, double c7) {
    require_traj(traj, "monitor_enstrophy");
    const GridSpec& g = traj.front().u.grid();
    double u0 = traj.front().u.max_norm();
    double w0 = traj.front().omega.max_abs();
    double t0 = traj.front().t;
    std::vector<BoundRecord> out;
    constexpr double pi = 3.14159265358979323846;
    for (const auto& st : traj) {
        double t = st.t - t0;
        if (!(t > 0.0)) continue;  // the shapes blow up at t = 0
        bool saturated = false;
        double r = radius_schedule(t, nu, u0, w0, c7);
        r = clip_radius(g, r, saturated);
        double local = sup_local_l2(st.omega, r);
        double lhs = local * local;
        double shape =
            u0 * u0 * (1.0 + r * r / (nu * t) + r * t * w0 / std::sqrt(nu * t));
        out.push_back(make_record("enstrophy", st.t, lhs, shape, saturated));
        out.push_back(make_record("enstrophy_norm", st.t, lhs / (pi * r * r),
                                  u0 * u0 / (nu * t), saturated));
    }
    return out;
}

std::vector<BoundRecord> monitor_thm3(const Trajectory& traj, double nu) {
    require_traj(traj, "monitor_thm3");
    const GridSpec& g = traj.front().u.grid();
    if (g.l1 < 4.0 * g.l2)
        throw std::invalid_argument("monitor_thm3: needs a strip grid with l1 >= 4 l2");
    double u0 = traj.front().u.max_norm();
    double t0 = traj.front().t;
    double ru = g.l2 * u0 / nu;
    double shape = u0 * (1.0 + std::pow(ru, 5));
    std::vector<BoundRecord> out;
    for (const auto& st : traj) {
        double t = st.t - t0;
        double lhs = st.u.max_norm() + std::sqrt(nu * t) * st.omega.max_abs();
        out.push_back(make_record("thm3", st.t, lhs, shape));
    }
    return out;
}

GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& f,
                              const std::vector<double>& g, const std::vector<double>& b,
                              double a, double tol) {
    size_t n = t.size();
    if (f.size() != n || g.size() != n || b.size() != n || n == 0)
        throw std::invalid_argument("gronwall_check: series must share one time grid");
    std::vector<double> bf(n);
    for (size_t i = 0; i < n; ++i) bf[i] = b[i] * f[i];
    GronwallReport rep;
    rep.hypothesis_holds = true;
    rep.conclusion_holds = true;
    double scale = std::max(a, 1e-300);
    for (size_t i = 0; i < n; ++i) {
        double lhs = f[i] + trapezoid(t, g, i);
        double hyp_rhs = a + trapezoid(t, bf, i);
        double hyp_margin = (lhs - hyp_rhs) / scale;
        rep.worst_hypothesis_margin = std::max(rep.worst_hypothesis_margin, hyp_margin);
        if (hyp_margin > tol) rep.hypothesis_holds = false;
        double conc_rhs = a * std::exp(trapezoid(t, b, i));
        double conc_margin = (lhs - conc_rhs) / std::max(conc_rhs, 1e-300);
        rep.worst_conclusion_margin = std::max(rep.worst_conclusion_margin, conc_margin);
        if (conc_margin > tol) rep.conclusion_holds = false;
    }
    return rep;
}

std::vector<BoundRecord> monitor_heat_ul(const std::vector<HeatSample>& traj, double nu,
                                         double rho_radius) {
    if (traj.empty()) throw std::invalid_argument("monitor_heat_ul: empty trajectory");
    if (!(rho_radius > 0.0))
        throw std::invalid_argument("monitor_heat_ul: rho_radius must be positive");
    const GridSpec& g = traj.front().u.grid();
    Point c{0.5 * g.l1, 0.5 * g.l2};
    ScalarField rho(g);
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) {
            Point d = wrap_delta({g.x1(i1), g.x2(i2)}, c, g);
            rho(i1, i2) = std::exp(-std::sqrt(d.x1 * d.x1 + d.x2 * d.x2) / rho_radius);
        }
    }
    auto weighted_mass = [&](const ScalarField& u) {
        double s = 0.0;
        for (int i = 0; i < g.size(); ++i) s += rho[i] * u[i] * u[i];
        return s * g.cell_area();
    };
    auto weighted_grad = [&](const ScalarField& u) {
        Spectrum s = to_spectral(u);
        ScalarField dx = to_physical(derivative(s, 1));
        ScalarField dy = to_physical(derivative(s, 2));
        double acc = 0.0;
        for (int i = 0; i < g.size(); ++i)
            acc += rho[i] * (dx[i] * dx[i] + dy[i] * dy[i]);
        return acc * g.cell_area();
    };

    double mass0 = weighted_mass(traj.front().u);
    double t0 = traj.front().t;
    double u0_ul = ul_norm(traj.front().u, 2.0, std::min(1.0, 0.25 * std::min(g.l1, g.l2)));
    double cum_grad = 0.0;
    double prev_rate = nu * weighted_grad(traj.front().u);
    double prev_t = t0;

    std::vector<BoundRecord> out;
    for (const auto& s : traj) {
        double t = s.t - t0;
        double rate = (s.t == t0) ? prev_rate : nu * weighted_grad(s.u);
        cum_grad += 0.5 * (s.t - prev_t) * (prev_rate + rate);
        prev_rate = rate;
        prev_t = s.t;
        double lhs_exp = weighted_mass(s.u) + cum_grad;
        double rhs_exp = mass0 * std::exp(nu * t / (rho_radius * rho_radius));
        out.push_back(make_record("heat_exp", s.t, lhs_exp, rhs_exp));

        bool saturated = false;
        double rt = clip_radius(g, std::sqrt(1.0 + t), saturated);
        double local = ul_norm(s.u, 2.0, rt);
        out.push_back(make_record("heat_ball", s.t, local * local / (rt * rt),
                                  u0_ul * u0_ul, saturated));
    }
    return out;
}

}  // namespace nsul
