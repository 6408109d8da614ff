#include "nsul/ulnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsul {

namespace {

constexpr double pi = std::numbers::pi;

// quintic smoothstep and its derivative, s in [0,1]
double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double dsmoothstep(double s) { return 30.0 * s * s * (1.0 + s * (-2.0 + s)); }

struct BallOffsets {
    std::vector<std::pair<int, int>> nodes;  // (d1, d2) index offsets
};

BallOffsets ball_offsets(const GridSpec& g, double radius) {
    BallOffsets b;
    int m1 = static_cast<int>(std::floor(radius / g.h1()));
    int m2 = static_cast<int>(std::floor(radius / g.h2()));
    double r2 = radius * radius;
    for (int d2 = -m2; d2 <= m2; ++d2) {
        double y2 = d2 * g.h2();
        for (int d1 = -m1; d1 <= m1; ++d1) {
            double y1 = d1 * g.h1();
            if (y1 * y1 + y2 * y2 <= r2) b.nodes.emplace_back(d1, d2);
        }
    }
    return b;
}

void require_radius(const GridSpec& g, double radius, const char* what) {
    if (!(radius > 0.0) || radius > 0.25 * std::min(g.l1, g.l2))
        throw std::invalid_argument(std::string(what) +
                                    ": radius must lie in (0, min(l1,l2)/4]");
}

// envelope sup_{|s-x|<=1} profile(s) by dense sampling of the window
double envelope_at(const WeightFunction& w, double x, double lo_clip) {
    constexpr int samples = 64;
    double lo = std::max(lo_clip, x - 1.0), hi = x + 1.0;
    double e = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double s = lo + (hi - lo) * i / samples;
        e = std::max(e, w.profile(s));
    }
    return e;
}

// integral of the envelope out to distance T from the origin
double envelope_integral_to(const WeightFunction& w, double T) {
    const double step = 0.05;
    double sum = 0.0;
    if (w.dim == 2) {
        for (double r = 0.5 * step; r < T; r += step)
            sum += envelope_at(w, r, 0.0) * 2.0 * pi * r * step;
    } else {
        for (double x = -T + 0.5 * step; x < T; x += step)
            sum += envelope_at(w, x, -1e30) * step;
    }
    return sum;
}

}  // namespace

WeightFunction weight_exponential() {
    WeightFunction w;
    w.name = "exp";
    w.dim = 2;
    w.profile = [](double r) { return std::exp(-std::abs(r)); };
    // envelope <= e^{1-r}; integral over |x| > T in 2-D
    w.tail_bound = [](double T) { return 2.0 * pi * std::exp(1.0 - T) * (T + 1.0); };
    return w;
}

WeightFunction weight_power(double m) {
    if (!(m > 2.0))
        throw std::invalid_argument("weight_power: requires m > 2 (integrability in 2-D)");
    WeightFunction w;
    w.name = "power(m=" + std::to_string(m) + ")";
    w.dim = 2;
    w.profile = [m](double r) { return std::pow(m + std::abs(r), -m); };
    // envelope <= (m-1+r)^{-m}; 2 pi r <= 2 pi (m-1+r)
    w.tail_bound = [m](double T) {
        return 2.0 * pi * std::pow(m - 1.0 + T, 2.0 - m) / (m - 2.0);
    };
    return w;
}

WeightFunction weight_spike() {
    WeightFunction w;
    w.name = "spike";
    w.dim = 1;
    w.profile = [](double x) {
        if (x >= -1.0) return 0.0;
        double k = std::floor(-x);
        // on [-k-1/k, -k] the value is k^{-1/2}
        if (-x >= k && -x <= k + 1.0 / k) return 1.0 / std::sqrt(k);
        return 0.0;
    };
    return w;
}

AdmissibilityReport admissibility_check(const WeightFunction& w) {
    AdmissibilityReport rep;
    // (a) positivity on a set of nonzero measure, by sampling
    int positive = 0, total = 0;
    double lo = (w.dim == 2) ? 0.0 : -100.0;
    for (double x = lo; x <= 100.0; x += 0.01) {
        ++total;
        if (w.profile(x) > 0.0) ++positive;
    }
    rep.positive_ok = positive >= 10;
    if (!rep.positive_ok)
        rep.detail += "assumption (a) failed: weight vanishes on the sampled set; ";

    // (b) envelope integrability
    double i_quarter = envelope_integral_to(w, 250.0);
    double i_full = envelope_integral_to(w, 1000.0);
    rep.envelope_integral = i_full;
    if (w.tail_bound) {
        rep.envelope_integral += w.tail_bound(1000.0);
        rep.envelope_ok = std::isfinite(rep.envelope_integral);
        if (!rep.envelope_ok) rep.detail += "assumption (b) failed: tail bound infinite; ";
    } else {
        // no analytic tail: require the partial sums to have stopped growing
        bool stalled = i_full <= 1.05 * i_quarter;
        rep.envelope_ok = stalled && std::isfinite(i_full);
        if (!rep.envelope_ok)
            rep.detail += "assumption (b) failed: envelope partial sums still growing "
                          "(I(1000)/I(250) > 1.05), integral appears divergent; ";
    }
    if (rep.detail.empty()) rep.detail = "pass";
    return rep;
}

double ul_norm(const ScalarField& f, double p, double ball_radius) {
    if (!(p >= 1.0)) throw std::invalid_argument("ul_norm: p >= 1 required");
    const GridSpec& g = f.grid();
    require_radius(g, ball_radius, "ul_norm");
    BallOffsets b = ball_offsets(g, ball_radius);
    double area = g.cell_area();
    double best = 0.0;
    for (int c2 = 0; c2 < g.n2; ++c2) {
        for (int c1 = 0; c1 < g.n1; ++c1) {
            double s = 0.0;
            for (auto [d1, d2] : b.nodes) {
                int i1 = c1 + d1, i2 = c2 + d2;
                i1 -= g.n1 * ((i1 >= g.n1) - (i1 < 0));
                i2 -= g.n2 * ((i2 >= g.n2) - (i2 < 0));
                s += std::pow(std::abs(f(i1, i2)), p);
            }
            best = std::max(best, s);
        }
    }
    return std::pow(best * area, 1.0 / p);
}

double weighted_norm(const ScalarField& f, double p, const WeightFunction& w) {
    if (!(p >= 1.0)) throw std::invalid_argument("weighted_norm: p >= 1 required");
    if (w.dim != 2)
        throw std::invalid_argument("weighted_norm: weight must be 2-D radial");
    AdmissibilityReport rep = admissibility_check(w);
    if (!rep.admissible())
        throw std::invalid_argument("weighted_norm: inadmissible weight '" + w.name +
                                    "': " + rep.detail);
    const GridSpec& g = f.grid();
    double area = g.cell_area();
    // weight table over index offsets at the minimal-image distance
    std::vector<double> table(static_cast<size_t>(g.size()));
    for (int d2 = 0; d2 < g.n2; ++d2) {
        double y2 = wrap_delta(d2 * g.h2(), 0.0, g.l2);
        for (int d1 = 0; d1 < g.n1; ++d1) {
            double y1 = wrap_delta(d1 * g.h1(), 0.0, g.l1);
            table[g.index(d1, d2)] = w.profile(std::sqrt(y1 * y1 + y2 * y2));
        }
    }
    std::vector<double> fp(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) fp[i] = std::pow(std::abs(f[i]), p);
    double best = 0.0;
    for (int c2 = 0; c2 < g.n2; ++c2) {
        for (int c1 = 0; c1 < g.n1; ++c1) {
            double s = 0.0;
            for (int i2 = 0; i2 < g.n2; ++i2) {
                int d2 = i2 - c2;
                if (d2 < 0) d2 += g.n2;
                const double* trow = &table[g.index(0, d2)];
                const double* frow = &fp[g.index(0, i2)];
                for (int i1 = 0; i1 < g.n1; ++i1) {
                    int d1 = i1 - c1;
                    if (d1 < 0) d1 += g.n1;
                    s += trow[d1] * frow[i1];
                }
            }
            best = std::max(best, s);
        }
    }
    return std::pow(best * area, 1.0 / p);
}

LocalizationBump::LocalizationBump(const Point& center, double radius)
    : center_(center), radius_(radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("LocalizationBump: radius must be positive");
}

double LocalizationBump::psi(double t) const {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    return 1.0 - smoothstep(t - 1.0);
}

double LocalizationBump::dpsi(double t) const {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    return -dsmoothstep(t - 1.0);
}

double LocalizationBump::c3() const {
    // |grad phi| = 2 psi |grad psi| <= 2 (sup|psi'|/R) sqrt(phi);
    // the quintic profile has sup|psi'| = 15/8
    return 2.0 * (15.0 / 8.0) / radius_;
}

double LocalizationBump::phi(const Point& x, const GridSpec& g) const {
    Point d = wrap_delta(x, center_, g);
    double t = std::sqrt(d.x1 * d.x1 + d.x2 * d.x2) / radius_;
    double ps = psi(t);
    return ps * ps;
}

std::array<double, 2> LocalizationBump::grad_phi(const Point& x, const GridSpec& g) const {
    Point d = wrap_delta(x, center_, g);
    double dist = std::sqrt(d.x1 * d.x1 + d.x2 * d.x2);
    if (dist == 0.0) return {0.0, 0.0};
    double t = dist / radius_;
    double factor = 2.0 * psi(t) * dpsi(t) / (radius_ * dist);
    return {factor * d.x1, factor * d.x2};
}

ScalarField LocalizationBump::field(const GridSpec& g) const {
    ScalarField out(g);
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1)
            out(i1, i2) = phi({g.x1(i1), g.x2(i2)}, g);
    return out;
}

void LocalizationBump::require_fits(const GridSpec& g) const {
    if (2.0 * radius_ > 0.5 * std::min(g.l1, g.l2))
        throw std::invalid_argument(
            "LocalizationBump: support disc of radius 2R exceeds the domain");
}

double local_energy(const VectorField& u, const Point& x, double radius) {
    const GridSpec& g = u.grid();
    require_radius(g, radius, "local_energy");
    int c1 = static_cast<int>(std::lround(x.x1 / g.h1()));
    int c2 = static_cast<int>(std::lround(x.x2 / g.h2()));
    BallOffsets b = ball_offsets(g, radius);
    double s = 0.0;
    for (auto [d1, d2] : b.nodes) {
        int i1 = (c1 + d1) % g.n1, i2 = (c2 + d2) % g.n2;
        if (i1 < 0) i1 += g.n1;
        if (i2 < 0) i2 += g.n2;
        double a = u.u1()(i1, i2) + u.u_inf()[0];
        double bb = u.u2()(i1, i2) + u.u_inf()[1];
        s += a * a + bb * bb;
    }
    return 0.5 * s * g.cell_area();
}

double z_r(const VectorField& u, double radius) {
    const GridSpec& g = u.grid();
    require_radius(g, radius, "z_r");
    BallOffsets b = ball_offsets(g, radius);
    std::vector<double> sq(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) {
        double a = u.u1()[i] + u.u_inf()[0];
        double bb = u.u2()[i] + u.u_inf()[1];
        sq[i] = a * a + bb * bb;
    }
    double best = 0.0;
    for (int c2 = 0; c2 < g.n2; ++c2) {
        for (int c1 = 0; c1 < g.n1; ++c1) {
            double s = 0.0;
            for (auto [d1, d2] : b.nodes) {
                int i1 = c1 + d1, i2 = c2 + d2;
                i1 -= g.n1 * ((i1 >= g.n1) - (i1 < 0));
                i2 -= g.n2 * ((i2 >= g.n2) - (i2 < 0));
                s += sq[g.index(i1, i2)];
            }
            best = std::max(best, s);
        }
    }
    return std::sqrt(best * g.cell_area());
}

}  // namespace nsul
