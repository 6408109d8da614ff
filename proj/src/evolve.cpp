#include "nsul/evolve.hpp"

#include "nsul/pressure.hpp"
#include "nsul/spectral.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nsul {

namespace {

// velocity spectra from the vorticity spectrum (fluctuation part only)
std::pair<Spectrum, Spectrum> velocity_spectra(const Spectrum& w) {
    const GridSpec& g = w.grid();
    Spectrum s1(g), s2(g);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = k1 * k1 + k2 * k2;
            if (kk == 0.0 || m1 == g.n1 / 2 || m2 == g.n2 / 2) continue;
            auto c = w(m1, m2) / kk;
            s1(m1, m2) = std::complex<double>(0.0, 1.0) * k2 * c;
            s2(m1, m2) = std::complex<double>(0.0, -1.0) * k1 * c;
        }
    }
    return {std::move(s1), std::move(s2)};
}

// N(w) = -dealias(u . grad w) in spectral space
Spectrum nonlinear_omega(const Spectrum& w) {
    const GridSpec& g = w.grid();
    auto [s1, s2] = velocity_spectra(w);
    ScalarField u1 = to_physical(s1);
    ScalarField u2 = to_physical(s2);
    ScalarField wx = to_physical(derivative(w, 1));
    ScalarField wy = to_physical(derivative(w, 2));
    ScalarField adv = dealiased_product(u1, wx);
    adv += dealiased_product(u2, wy);
    Spectrum n = to_spectral(adv);
    dealias(n);
    for (int i = 0; i < g.size(); ++i) n[i] = -n[i];
    return n;
}

void attach_velocity(SolverState& st, const Vec2& u_inf) {
    Spectrum w = to_spectral(st.omega);
    auto [s1, s2] = velocity_spectra(w);
    st.u.u1() = to_physical(s1);
    st.u.u2() = to_physical(s2);
    st.u.u_inf() = u_inf;
}

// spectra of P div(u (x) u) from the velocity spectra of one time node
std::pair<Spectrum, Spectrum> duhamel_density(const Spectrum& s1, const Spectrum& s2) {
    const GridSpec& g = s1.grid();
    ScalarField u1 = to_physical(s1);
    ScalarField u2 = to_physical(s2);
    Spectrum t11 = to_spectral(dealiased_product(u1, u1));
    Spectrum t12 = to_spectral(dealiased_product(u1, u2));
    Spectrum t22 = to_spectral(dealiased_product(u2, u2));
    Spectrum h1(g), h2(g);
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double k1 = g.k1(m1), k2 = g.k2(m2);
            double kk = k1 * k1 + k2 * k2;
            int i = g.index(m1, m2);
            std::complex<double> ik1(0.0, k1), ik2(0.0, k2);
            auto d1 = ik1 * t11[i] + ik2 * t12[i];
            auto d2 = ik1 * t12[i] + ik2 * t22[i];
            if (kk == 0.0) {
                h1[i] = d1;
                h2[i] = d2;
            } else {
                auto kdot = (k1 * d1 + k2 * d2) / kk;
                h1[i] = d1 - k1 * kdot;
                h2[i] = d2 - k2 * kdot;
            }
        }
    }
    dealias(h1);
    dealias(h2);
    return {std::move(h1), std::move(h2)};
}

}  // namespace

void SolverConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("SolverConfig: nu must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(picard_tol > 0.0))
        throw std::invalid_argument("SolverConfig: picard_tol must be positive");
    if (picard_max_iter < 1 || picard_time_nodes < 2 || picard_quad_nodes < 2)
        throw std::invalid_argument("SolverConfig: iteration/node counts too small");
}

SolverState make_state(const VectorField& u0) {
    u0.require_finite("make_state");
    if (relative_divergence(u0) > 1e-8)
        throw std::invalid_argument("make_state: velocity is not divergence-free");
    const GridSpec& g = u0.grid();
    SolverState st(g);
    // fold any nonzero mean of the fluctuation into u_inf
    double m1 = u0.u1().mean(), m2 = u0.u2().mean();
    st.u = u0;
    for (int i = 0; i < g.size(); ++i) {
        st.u.u1()[i] -= m1;
        st.u.u2()[i] -= m2;
    }
    st.u.u_inf() = {u0.u_inf()[0] + m1, u0.u_inf()[1] + m2};
    st.omega = curl(st.u);
    return st;
}

SolverState make_state_from_vorticity(const ScalarField& omega0, const Vec2& u_inf) {
    SolverState st(omega0.grid());
    st.omega = omega0;
    double m = std::abs(omega0.mean());
    if (m > 1e-10 * std::max(omega0.max_abs(), 1e-300))
        throw std::invalid_argument("make_state_from_vorticity: vorticity mean not zero");
    attach_velocity(st, u_inf);
    return st;
}

void vorticity_step(SolverState& state, const SolverConfig& cfg) {
    cfg.validate();
    const GridSpec& g = state.omega.grid();
    double h = std::min(g.h1(), g.h2());
    double cfl = state.u.max_norm() * cfg.dt / h;
    if (cfl > 0.5) {
        std::ostringstream msg;
        msg << "vorticity_step: CFL number " << cfl << " exceeds 0.5 (reduce dt)";
        throw std::runtime_error(msg.str());
    }
    double dt = cfg.dt, nu = cfg.nu;
    Spectrum w = to_spectral(state.omega);
    dealias(w);

    auto decayed = [&](const Spectrum& s, double tau) { return heat_propagate(s, tau); };
    auto axpy = [&](const Spectrum& a, double alpha, const Spectrum& b) {
        Spectrum r = a;
        for (int i = 0; i < g.size(); ++i) r[i] += alpha * b[i];
        return r;
    };

    Spectrum k1 = nonlinear_omega(w);
    Spectrum k2 = nonlinear_omega(decayed(axpy(w, 0.5 * dt, k1), 0.5 * nu * dt));
    Spectrum k3 = axpy(decayed(w, 0.5 * nu * dt), 0.5 * dt, k2);
    k3 = nonlinear_omega(k3);
    Spectrum k4 = axpy(decayed(w, nu * dt), dt, decayed(k3, 0.5 * nu * dt));
    k4 = nonlinear_omega(k4);

    Spectrum next = decayed(w, nu * dt);
    Spectrum ek1 = decayed(k1, nu * dt);
    Spectrum e2k2 = decayed(k2, 0.5 * nu * dt);
    Spectrum e2k3 = decayed(k3, 0.5 * nu * dt);
    for (int i = 0; i < g.size(); ++i)
        next[i] += (dt / 6.0) * (ek1[i] + 2.0 * (e2k2[i] + e2k3[i]) + k4[i]);

    // constant advection by u_inf as an exact phase shift
    const Vec2& a = state.u.u_inf();
    if (a[0] != 0.0 || a[1] != 0.0) {
        for (int m2 = 0; m2 < g.n2; ++m2) {
            for (int m1 = 0; m1 < g.n1; ++m1) {
                double phase = -(g.k1(m1) * a[0] + g.k2(m2) * a[1]) * dt;
                next(m1, m2) *= std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
    }

    state.omega = to_physical(next);
    state.omega.require_finite("vorticity_step");
    attach_velocity(state, a);
    state.t += dt;
}

ScalarField heat_solve(const ScalarField& u0, double nu, double t) {
    if (!(nu > 0.0)) throw std::invalid_argument("heat_solve: nu must be positive");
    return to_physical(heat_propagate(to_spectral(u0), nu * t));
}

PicardResult picard_local_solve(const VectorField& u0_in, const SolverConfig& cfg,
                                double T) {
    cfg.validate();
    if (!(T > 0.0)) throw std::invalid_argument("picard_local_solve: T must be positive");
    SolverState init = make_state(u0_in);  // normalizes the mean into u_inf
    const GridSpec& g = u0_in.grid();
    double nu = cfg.nu;
    double u0_norm = init.u.max_norm_fluctuation();

    // measure the smoothing constant: sup sqrt(nu tau) ||div S(nu tau) P(f(x)f)||_inf
    // over band-limited divergence-free probes, normalized by ||f||_inf^2
    double c0 = 0.0;
    {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int probe = 0; probe < 3; ++probe) {
            Spectrum w(g);
            for (int m2 = 0; m2 < g.n2; ++m2) {
                for (int m1 = 0; m1 < g.n1; ++m1) {
                    int a1 = std::abs(g.signed_mode(m1, g.n1));
                    int a2 = std::abs(g.signed_mode(m2, g.n2));
                    int mag = a1 * a1 + a2 * a2;
                    if (mag < 1 || mag > 16) continue;
                    w(m1, m2) = {gauss(rng), gauss(rng)};
                }
            }
            // enforce Hermitian symmetry by transforming through physical space
            ScalarField wf = to_physical(w);
            w = to_spectral(wf);
            auto [s1, s2] = velocity_spectra(w);
            double fn = std::max(to_physical(s1).max_abs(), to_physical(s2).max_abs());
            if (fn == 0.0) continue;
            auto [h1, h2] = duhamel_density(s1, s2);
            for (double tau : {T, T / 4.0, T / 16.0}) {
                double gn = std::max(to_physical(heat_propagate(h1, nu * tau)).max_abs(),
                                     to_physical(heat_propagate(h2, nu * tau)).max_abs());
                c0 = std::max(c0, std::sqrt(nu * tau) * gn / (fn * fn));
            }
        }
    }

    double m_ball = 2.0 * u0_norm;
    double kappa = 8.0 * c0 * m_ball * std::sqrt(T / nu);
    if (kappa >= 1.0) {
        std::ostringstream msg;
        msg << "picard_local_solve: measured contraction factor " << kappa
            << " >= 1; shorten the horizon (T of order nu/||u0||_inf^2, here <= "
            << T / (kappa * kappa) << ")";
        throw std::runtime_error(msg.str());
    }

    int nt = cfg.picard_time_nodes;
    int nq = cfg.picard_quad_nodes;
    std::vector<double> times(nt + 1);
    for (int i = 0; i <= nt; ++i) times[i] = T * i / nt;

    Spectrum base1 = to_spectral(init.u.u1());
    Spectrum base2 = to_spectral(init.u.u2());
    dealias(base1);
    dealias(base2);

    // iterate storage: spectra of the fluctuation at each node
    std::vector<Spectrum> s1(nt + 1, Spectrum(g)), s2(nt + 1, Spectrum(g));
    for (int i = 0; i <= nt; ++i) {
        s1[i] = heat_propagate(base1, nu * times[i]);
        s2[i] = heat_propagate(base2, nu * times[i]);
    }

    PicardResult res;
    res.times = times;
    res.c0_hat = c0;
    res.kappa_hat = kappa;

    double dist = 0.0;
    for (int sweep = 0; sweep < cfg.picard_max_iter; ++sweep) {
        // density P div(u (x) u) at the storage nodes
        std::vector<Spectrum> h1, h2;
        h1.reserve(nt + 1);
        h2.reserve(nt + 1);
        for (int i = 0; i <= nt; ++i) {
            auto [a, b] = duhamel_density(s1[i], s2[i]);
            h1.push_back(std::move(a));
            h2.push_back(std::move(b));
        }
        dist = 0.0;
        std::vector<Spectrum> n1(nt + 1, Spectrum(g)), n2(nt + 1, Spectrum(g));
        n1[0] = base1;
        n2[0] = base2;
        for (int i = 1; i <= nt; ++i) {
            double ti = times[i];
            Spectrum acc1(g), acc2(g);
            // graded nodes s = t_i (1 - (1-tau)^2) cluster at s = t_i where
            // the div S(t_i - s) multiplier peaks; trapezoid in tau
            for (int q = 0; q <= nq; ++q) {
                double tau = static_cast<double>(q) / nq;
                double wq = (q == 0 || q == nq) ? 0.5 : 1.0;
                double jac = 2.0 * ti * (1.0 - tau);
                if (jac == 0.0) continue;
                double s = ti * (1.0 - (1.0 - tau) * (1.0 - tau));
                double pos = s / (T / nt);
                int j = std::min(static_cast<int>(pos), nt - 1);
                double frac = pos - j;
                double weight = wq * jac / nq;
                for (int m2 = 0; m2 < g.n2; ++m2) {
                    for (int m1 = 0; m1 < g.n1; ++m1) {
                        double k1 = g.k1(m1), k2 = g.k2(m2);
                        double decay = std::exp(-nu * (ti - s) * (k1 * k1 + k2 * k2));
                        int idx = g.index(m1, m2);
                        auto hv1 = (1.0 - frac) * h1[j][idx] + frac * h1[j + 1][idx];
                        auto hv2 = (1.0 - frac) * h2[j][idx] + frac * h2[j + 1][idx];
                        acc1[idx] += weight * decay * hv1;
                        acc2[idx] += weight * decay * hv2;
                    }
                }
            }
            n1[i] = heat_propagate(base1, nu * ti);
            n2[i] = heat_propagate(base2, nu * ti);
            for (int idx = 0; idx < g.size(); ++idx) {
                n1[i][idx] -= acc1[idx];
                n2[i][idx] -= acc2[idx];
            }
            ScalarField d1 = to_physical(n1[i]);
            d1 -= to_physical(s1[i]);
            ScalarField d2 = to_physical(n2[i]);
            d2 -= to_physical(s2[i]);
            dist = std::max(dist, std::max(d1.max_abs(), d2.max_abs()));
        }
        s1 = std::move(n1);
        s2 = std::move(n2);
        res.iterate_distances.push_back(dist);
        res.iterations = sweep + 1;
        if (dist <= cfg.picard_tol * std::max(1.0, u0_norm)) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged) {
        size_t n = res.iterate_distances.size();
        double ratio = (n >= 2 && res.iterate_distances[n - 2] > 0.0)
                           ? res.iterate_distances[n - 1] / res.iterate_distances[n - 2]
                           : 0.0;
        std::ostringstream msg;
        msg << "picard_local_solve: no convergence in " << cfg.picard_max_iter
            << " sweeps (last distance " << dist << ", observed ratio " << ratio << ")";
        throw std::runtime_error(msg.str());
    }

    const Vec2& a = init.u.u_inf();
    for (int i = 0; i <= nt; ++i) {
        if (a[0] != 0.0 || a[1] != 0.0) {
            // shift back from the co-moving frame: exact phase factor
            for (int m2 = 0; m2 < g.n2; ++m2) {
                for (int m1 = 0; m1 < g.n1; ++m1) {
                    double phase = -(g.k1(m1) * a[0] + g.k2(m2) * a[1]) * times[i];
                    auto f = std::complex<double>(std::cos(phase), std::sin(phase));
                    s1[i](m1, m2) *= f;
                    s2[i](m1, m2) *= f;
                }
            }
        }
        VectorField u(g);
        u.u1() = to_physical(s1[i]);
        u.u2() = to_physical(s2[i]);
        u.u_inf() = a;
        res.u.push_back(std::move(u));
    }
    return res;
}

double kinetic_energy(const VectorField& u) {
    const GridSpec& g = u.grid();
    double s = 0.0;
    for (int i = 0; i < g.size(); ++i)
        s += u.u1()[i] * u.u1()[i] + u.u2()[i] * u.u2()[i];
    double mean_part = u.u_inf()[0] * u.u_inf()[0] + u.u_inf()[1] * u.u_inf()[1];
    return 0.5 * (s * g.cell_area() + mean_part * g.l1 * g.l2);
}

double gradient_energy(const VectorField& u) {
    const GridSpec& g = u.grid();
    Spectrum s1 = to_spectral(u.u1());
    Spectrum s2 = to_spectral(u.u2());
    double sum = 0.0;
    for (int m2 = 0; m2 < g.n2; ++m2) {
        for (int m1 = 0; m1 < g.n1; ++m1) {
            double kk = g.k1(m1) * g.k1(m1) + g.k2(m2) * g.k2(m2);
            int i = g.index(m1, m2);
            sum += kk * (std::norm(s1[i]) + std::norm(s2[i]));
        }
    }
    double n = static_cast<double>(g.size());
    return sum / (n * n) * g.l1 * g.l2;
}

void EnergyLedger::register_bump(const LocalizationBump& bump) {
    if (initialized_)
        throw std::logic_error("EnergyLedger: register bumps before initialize");
    bumps_.push_back(bump);
}

void EnergyLedger::initialize(const SolverState& s0, const SolverConfig& cfg) {
    e0_ = e_ = kinetic_energy(s0.u);
    d_ = 0.0;
    prev_diss_rate_ = cfg.nu * gradient_energy(s0.u);
    head_rates_.assign(1, {s0.t, prev_diss_rate_});
    tail_rates_.assign(1, {s0.t, prev_diss_rate_});
    local_worst_.assign(bumps_.size(), 0.0);
    local_scale_.clear();
    const GridSpec& g = s0.u.grid();
    for (const auto& b : bumps_) {
        b.require_fits(g);
        ScalarField phi = b.field(g);
        double s = 0.0;
        for (int i = 0; i < g.size(); ++i) {
            double a1 = s0.u.u1()[i] + s0.u.u_inf()[0];
            double a2 = s0.u.u2()[i] + s0.u.u_inf()[1];
            s += 0.5 * (a1 * a1 + a2 * a2) * phi[i];
        }
        local_scale_.push_back(std::max(s * g.cell_area(), 1e-12));
    }
    initialized_ = true;
}

namespace {

// derivative at `at` of the quadratic through three (t, f) samples
double quad_derivative(const std::vector<std::pair<double, double>>& p, double at) {
    double t0 = p[0].first, t1 = p[1].first, t2 = p[2].first;
    double f0 = p[0].second, f1 = p[1].second, f2 = p[2].second;
    double d0 = f0 * (2.0 * at - t1 - t2) / ((t0 - t1) * (t0 - t2));
    double d1 = f1 * (2.0 * at - t0 - t2) / ((t1 - t0) * (t1 - t2));
    double d2 = f2 * (2.0 * at - t0 - t1) / ((t2 - t0) * (t2 - t1));
    return d0 + d1 + d2;
}

}  // namespace

double EnergyLedger::dissipation() const {
    double d = d_;
    // composite-trapezoid bias telescopes to (h^2/12)(f'(a) - f'(b))
    if (head_rates_.size() == 3 && tail_rates_.size() == 3) {
        double ha = head_rates_[1].first - head_rates_[0].first;
        double hb = tail_rates_[2].first - tail_rates_[1].first;
        d += ha * ha / 12.0 * quad_derivative(head_rates_, head_rates_[0].first);
        d -= hb * hb / 12.0 * quad_derivative(tail_rates_, tail_rates_[2].first);
    }
    return d;
}

double EnergyLedger::residual() const {
    if (e0_ == 0.0) return 0.0;
    return std::abs(e_ + dissipation() - e0_) / e0_;
}

void EnergyLedger::update(const SolverState& prev, const SolverState& next,
                          const SolverConfig& cfg) {
    if (!initialized_) throw std::logic_error("EnergyLedger: initialize first");
    double dt = next.t - prev.t;
    if (!(dt > 0.0)) throw std::invalid_argument("EnergyLedger: states out of order");
    double rate_next = cfg.nu * gradient_energy(next.u);
    d_ += 0.5 * dt * (prev_diss_rate_ + rate_next);
    prev_diss_rate_ = rate_next;
    if (head_rates_.size() < 3) head_rates_.push_back({next.t, rate_next});
    tail_rates_.push_back({next.t, rate_next});
    if (tail_rates_.size() > 3) tail_rates_.erase(tail_rates_.begin());
    e_ = kinetic_energy(next.u);

    if (bumps_.empty()) return;
    const GridSpec& g = next.u.grid();
    // local balance d/dt int e phi = int (p+e) u . grad phi
    //                               + nu int e Lap phi - nu int |grad u|^2 phi
    auto local_terms = [&](const SolverState& st, size_t bi, double& a_phi,
                           double& rhs) {
        const LocalizationBump& b = bumps_[bi];
        ScalarField phi = b.field(g);
        Spectrum phis = to_spectral(phi);
        Spectrum lap = derivative(phis, 1, 2);
        Spectrum lap2 = derivative(phis, 2, 2);
        for (int i = 0; i < g.size(); ++i) lap[i] += lap2[i];
        ScalarField lap_phi = to_physical(lap);
        ScalarField p = pressure_spectral(st.u);
        Spectrum su1 = to_spectral(st.u.u1());
        Spectrum su2 = to_spectral(st.u.u2());
        ScalarField d11 = to_physical(derivative(su1, 1));
        ScalarField d12 = to_physical(derivative(su1, 2));
        ScalarField d21 = to_physical(derivative(su2, 1));
        ScalarField d22 = to_physical(derivative(su2, 2));
        double a = 0.0, r = 0.0;
        for (int i2 = 0; i2 < g.n2; ++i2) {
            for (int i1 = 0; i1 < g.n1; ++i1) {
                int i = g.index(i1, i2);
                double v1 = st.u.u1()[i] + st.u.u_inf()[0];
                double v2 = st.u.u2()[i] + st.u.u_inf()[1];
                double e = 0.5 * (v1 * v1 + v2 * v2);
                double phiv = phi[i];
                a += e * phiv;
                auto grad = b.grad_phi({g.x1(i1), g.x2(i2)}, g);
                double gradsq = d11[i] * d11[i] + d12[i] * d12[i] +
                                d21[i] * d21[i] + d22[i] * d22[i];
                r += (p[i] + e) * (v1 * grad[0] + v2 * grad[1]) +
                     cfg.nu * e * lap_phi[i] - cfg.nu * gradsq * phiv;
            }
        }
        a_phi = a * g.cell_area();
        rhs = r * g.cell_area();
    };
    for (size_t bi = 0; bi < bumps_.size(); ++bi) {
        double a_prev, rhs_prev, a_next, rhs_next;
        local_terms(prev, bi, a_prev, rhs_prev);
        local_terms(next, bi, a_next, rhs_next);
        double res = std::abs(a_next - a_prev - 0.5 * dt * (rhs_prev + rhs_next)) /
                     local_scale_[bi];
        local_worst_[bi] = std::max(local_worst_[bi], res);
    }
}

}  // namespace nsul
