#include "nsul/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <stdexcept>

namespace nsul {

namespace {

// Per-thread plan cache. FFTW planning is not thread safe and executing a
// shared plan from several threads needs external locking; thread_local
// plans sidestep both.
class FftEngine {
public:
    static FftEngine& get(const GridSpec& g) {
        thread_local std::map<std::pair<int, int>, FftEngine> cache;
        auto key = std::make_pair(g.n1, g.n2);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.try_emplace(key, g.n1, g.n2).first;
        return it->second;
    }

    FftEngine(int n1, int n2) : n1_(n1), n2_(n2) {
        buf_ = fftw_alloc_complex(static_cast<size_t>(n1) * n2);
        // FFTW is row-major with n2 as the slow dimension, matching the
        // field layout index = i2*n1 + i1.
        fwd_ = fftw_plan_dft_2d(n2, n1, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(n2, n1, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;
    FftEngine(FftEngine&& o) noexcept
        : n1_(o.n1_), n2_(o.n2_), buf_(o.buf_), fwd_(o.fwd_), bwd_(o.bwd_) {
        o.buf_ = nullptr;
        o.fwd_ = nullptr;
        o.bwd_ = nullptr;
    }

    ~FftEngine() {
        if (fwd_) fftw_destroy_plan(fwd_);
        if (bwd_) fftw_destroy_plan(bwd_);
        if (buf_) fftw_free(buf_);
    }

    void forward(const double* in, std::complex<double>* out) {
        size_t n = static_cast<size_t>(n1_) * n2_;
        for (size_t i = 0; i < n; ++i) {
            buf_[i][0] = in[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        for (size_t i = 0; i < n; ++i)
            out[i] = {buf_[i][0], buf_[i][1]};
    }

    void backward(const std::complex<double>* in, double* out) {
        size_t n = static_cast<size_t>(n1_) * n2_;
        for (size_t i = 0; i < n; ++i) {
            buf_[i][0] = in[i].real();
            buf_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        double scale = 1.0 / static_cast<double>(n);
        for (size_t i = 0; i < n; ++i)
            out[i] = buf_[i][0] * scale;
    }

private:
    int n1_, n2_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

// Applies f(k1, k2, coeff) over all modes.
template <typename F>
void for_each_mode(Spectrum& s, F&& f) {
    const GridSpec& g = s.grid();
    for (int m2 = 0; m2 < g.n2; ++m2) {
        double k2 = g.k2(m2);
        for (int m1 = 0; m1 < g.n1; ++m1)
            f(g.k1(m1), k2, s(m1, m2));
    }
}

}  // namespace

Spectrum to_spectral(const ScalarField& f) {
    f.require_finite("to_spectral");
    Spectrum s(f.grid());
    FftEngine::get(f.grid()).forward(f.values().data(), s.coeffs().data());
    return s;
}

ScalarField to_physical(const Spectrum& s) {
    ScalarField f(s.grid());
    FftEngine::get(s.grid()).backward(s.coeffs().data(), f.values().data());
    return f;
}

Spectrum heat_propagate(const Spectrum& s, double tau) {
    if (!(tau >= 0.0))
        throw std::invalid_argument("heat_propagate: tau must be >= 0");
    Spectrum r = s;
    for_each_mode(r, [tau](double k1, double k2, std::complex<double>& c) {
        c *= std::exp(-tau * (k1 * k1 + k2 * k2));
    });
    return r;
}

Spectrum derivative(const Spectrum& s, int axis, int order) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("derivative: axis must be 1 or 2");
    if (order < 1 || order > 4)
        throw std::invalid_argument("derivative: order must be in [1,4]");
    const GridSpec& g = s.grid();
    Spectrum r = s;
    bool odd = (order % 2) != 0;
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            bool nyq = (axis == 1) ? (m1 == g.n1 / 2) : (m2 == g.n2 / 2);
            if (odd && nyq) {
                r(m1, m2) = 0.0;
                continue;
            }
            double k = (axis == 1) ? g.k1(m1) : g.k2(m2);
            r(m1, m2) *= std::pow(std::complex<double>(0.0, k), order);
        }
    }
    return r;
}

Spectrum riesz(const Spectrum& s, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("riesz: axis must be 1 or 2");
    const GridSpec& g = s.grid();
    Spectrum r = s;
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = std::sqrt(k1 * k1 + k2 * k2);
            bool nyq = (axis == 1) ? (m1 == g.n1 / 2) : (m2 == g.n2 / 2);
            if (kk == 0.0 || nyq) {
                r(m1, m2) = 0.0;
            } else {
                double k = (axis == 1) ? k1 : k2;
                r(m1, m2) *= std::complex<double>(0.0, k / kk);
            }
        }
    }
    return r;
}

VectorField leray_project(const VectorField& v) {
    const GridSpec& g = v.grid();
    Spectrum s1 = to_spectral(v.u1());
    Spectrum s2 = to_spectral(v.u2());
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0) continue;  // constants are divergence free
            auto a = s1(m1, m2);
            auto b = s2(m1, m2);
            auto dot = (k1 * a + k2 * b) / kk;
            s1(m1, m2) = a - k1 * dot;
            s2(m1, m2) = b - k2 * dot;
        }
    }
    VectorField r(g);
    r.u1() = to_physical(s1);
    r.u2() = to_physical(s2);
    r.u_inf() = v.u_inf();
    return r;
}

double cutoff_chi_hat(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double s = r - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

VectorField low_pass(const VectorField& v, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("low_pass: delta must be positive");
    const GridSpec& g = v.grid();
    Spectrum s1 = to_spectral(v.u1());
    Spectrum s2 = to_spectral(v.u2());
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double w = cutoff_chi_hat(std::sqrt(k1 * k1 + k2 * k2) / delta);
            s1(m1, m2) *= w;
            s2(m1, m2) *= w;
        }
    }
    VectorField r(g);
    r.u1() = to_physical(s1);
    r.u2() = to_physical(s2);
    r.u_inf() = v.u_inf();
    return r;
}

void dealias(Spectrum& s) {
    const GridSpec& g = s.grid();
    int max1 = static_cast<int>(std::floor(g.dealias_fraction * (g.n1 / 2)));
    int max2 = static_cast<int>(std::floor(g.dealias_fraction * (g.n2 / 2)));
    for (int m2 = 0; m2 < g.n2; ++m2) {
        int j2 = std::abs(GridSpec::signed_mode(m2, g.n2));
        for (int m1 = 0; m1 < g.n1; ++m1) {
            int j1 = std::abs(GridSpec::signed_mode(m1, g.n1));
            if (j1 > max1 || j2 > max2 || m1 == g.n1 / 2 || m2 == g.n2 / 2)
                s(m1, m2) = 0.0;
        }
    }
}

ScalarField dealiased_product(const ScalarField& a, const ScalarField& b) {
    Spectrum sa = to_spectral(a);
    Spectrum sb = to_spectral(b);
    dealias(sa);
    dealias(sb);
    ScalarField p = pointwise(to_physical(sa), to_physical(sb));
    Spectrum sp = to_spectral(p);
    dealias(sp);
    return to_physical(sp);
}

ScalarField curl(const VectorField& u) {
    Spectrum c = derivative(to_spectral(u.u2()), 1, 1);
    Spectrum d = derivative(to_spectral(u.u1()), 2, 1);
    for (int i = 0; i < u.grid().size(); ++i)
        c.coeffs()[i] -= d.coeffs()[i];
    return to_physical(c);
}

Spectrum divergence_spectrum(const VectorField& u) {
    Spectrum d = derivative(to_spectral(u.u1()), 1, 1);
    Spectrum d2 = derivative(to_spectral(u.u2()), 2, 1);
    for (int i = 0; i < u.grid().size(); ++i)
        d.coeffs()[i] += d2.coeffs()[i];
    return d;
}

double relative_divergence(const VectorField& u) {
    double nu1 = to_spectral(u.u1()).l2_norm();
    double nu2 = to_spectral(u.u2()).l2_norm();
    double nrm = std::sqrt(nu1 * nu1 + nu2 * nu2);
    if (nrm == 0.0) return 0.0;
    return divergence_spectrum(u).l2_norm() / nrm;
}

namespace {

void require_divergence_free(const VectorField& u, const char* what) {
    double r = relative_divergence(u);
    if (r > 1e-8)
        throw std::invalid_argument(std::string(what) +
                                    ": input not divergence free (relative "
                                    "spectral divergence " +
                                    std::to_string(r) + ")");
}

}  // namespace

VectorField nonlinear_term(const VectorField& u) {
    require_divergence_free(u, "nonlinear_term");
    const GridSpec& g = u.grid();
    // u x u with the constant background folded in: (u+c) x (u+c) differs
    // from u x u by terms whose divergence is a constant gradient, which
    // the projection kills, plus c . grad u handled by the phase-exact
    // path in evolve; here we keep the mean-zero part only.
    ScalarField t11 = dealiased_product(u.u1(), u.u1());
    ScalarField t12 = dealiased_product(u.u1(), u.u2());
    ScalarField t22 = dealiased_product(u.u2(), u.u2());
    Spectrum d1 = derivative(to_spectral(t11), 1, 1);
    Spectrum d1b = derivative(to_spectral(t12), 2, 1);
    Spectrum d2 = derivative(to_spectral(t12), 1, 1);
    Spectrum d2b = derivative(to_spectral(t22), 2, 1);
    for (int i = 0; i < g.size(); ++i) {
        d1.coeffs()[i] += d1b.coeffs()[i];
        d2.coeffs()[i] += d2b.coeffs()[i];
    }
    VectorField div(g);
    div.u1() = to_physical(d1);
    div.u2() = to_physical(d2);
    VectorField r = leray_project(div);
    r.u_inf() = {0.0, 0.0};
    return r;
}

VectorField nonlinear_term_rotational(const VectorField& u) {
    require_divergence_free(u, "nonlinear_term_rotational");
    ScalarField w = curl(u);
    const GridSpec& g = u.grid();
    VectorField uw(g);
    uw.u1() = dealiased_product(u.u2(), w);
    uw.u1() *= -1.0;  // u^perp = (-u2, u1)
    uw.u2() = dealiased_product(u.u1(), w);
    VectorField r = leray_project(uw);
    r.u_inf() = {0.0, 0.0};
    return r;
}

VectorField gradient(const Spectrum& s) {
    VectorField r(s.grid());
    r.u1() = to_physical(derivative(s, 1, 1));
    r.u2() = to_physical(derivative(s, 2, 1));
    return r;
}

}  // namespace nsul
