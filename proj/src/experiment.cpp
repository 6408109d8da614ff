#include "nsul/experiment.hpp"

#include "nsul/csvio.hpp"
#include "nsul/pressure.hpp"
#include "nsul/snapshot.hpp"
#include "nsul/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nsul {

namespace {

namespace fs = std::filesystem;

double enstrophy_of(const ScalarField& omega) {
    double n = omega.l2_norm();
    return n * n;
}

// record names each monitor emits, in CSV column order
std::vector<std::string> record_names(const std::string& monitor) {
    if (monitor == "thm1") return {"thm1"};
    if (monitor == "thm2") return {"thm2", "thm2_refined"};
    if (monitor == "ul_energy") return {"ul_energy"};
    if (monitor == "enstrophy") return {"enstrophy", "enstrophy_norm"};
    if (monitor == "thm3") return {"thm3"};
    if (monitor == "heat_ul") return {"heat_exp", "heat_ball"};
    throw std::invalid_argument("unknown monitor: " + monitor);
}

std::string fit_name_for(const std::string& record) {
    static const std::map<std::string, std::string> names = {
        {"thm1", "K0"},          {"thm2", "K3"},
        {"thm2_refined", "C8"},  {"ul_energy", "C6"},
        {"enstrophy", "C9"},     {"enstrophy_norm", "K6"},
        {"thm3", "K7"},          {"heat_exp", "H1"},
        {"heat_ball", "H4"}};
    return names.at(record);
}

std::vector<BoundRecord> run_monitor(const std::string& monitor, const Trajectory& traj,
                                     const ExperimentConfig& cfg) {
    if (monitor == "thm1") return monitor_thm1(traj);
    if (monitor == "thm2") return monitor_thm2(traj, cfg.nu);
    if (monitor == "ul_energy") return monitor_ul_energy(traj, cfg.nu, cfg.c7);
    if (monitor == "enstrophy") return monitor_enstrophy(traj, cfg.nu, cfg.c7);
    if (monitor == "thm3") return monitor_thm3(traj, cfg.nu);
    if (monitor == "heat_ul") {
        std::vector<HeatSample> hs;
        for (const auto& st : traj) hs.push_back({st.t, st.u.u1()});
        double rr = 0.25 * std::min(traj.front().u.grid().l1, traj.front().u.grid().l2);
        return monitor_heat_ul(hs, cfg.nu, std::min(1.0, rr));
    }
    throw std::invalid_argument("unknown monitor: " + monitor);
}

Trajectory integrate(const ExperimentConfig& cfg, EnergyLedger* ledger) {
    SolverState st = build_initial_state(cfg.ic, cfg.grid, cfg.u_inf);
    SolverConfig sc = cfg.solver();
    Trajectory samples;
    samples.push_back(st);

    if (cfg.scheme == Scheme::heat) {
        Spectrum s1 = to_spectral(st.u.u1());
        Spectrum s2 = to_spectral(st.u.u2());
        double t = 0.0;
        int step = 0;
        while (t < cfg.t_end - 1e-12) {
            t = std::min(cfg.t_end, t + cfg.dt * cfg.output_every);
            ++step;
            SolverState next(cfg.grid);
            next.t = t;
            next.u.u1() = to_physical(heat_propagate(s1, cfg.nu * t));
            next.u.u2() = to_physical(heat_propagate(s2, cfg.nu * t));
            next.u.u_inf() = st.u.u_inf();
            next.omega = curl(next.u);
            samples.push_back(std::move(next));
        }
        return samples;
    }

    if (cfg.scheme == Scheme::picard) {
        PicardResult res = picard_local_solve(st.u, sc, cfg.t_end);
        Trajectory traj;
        size_t stride = std::max<size_t>(1, res.times.size() / 16);
        for (size_t i = 0; i < res.times.size(); ++i) {
            if (i % stride != 0 && i + 1 != res.times.size()) continue;
            SolverState s(cfg.grid);
            s.t = res.times[i];
            s.u = res.u[i];
            s.omega = curl(s.u);
            traj.push_back(std::move(s));
        }
        return traj;
    }

    if (ledger) ledger->initialize(st, sc);
    int step = 0;
    int total = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    while (step < total) {
        SolverState prev = st;
        vorticity_step(st, sc);
        ++step;
        if (ledger) ledger->update(prev, st, sc);
        if (step % cfg.output_every == 0 || step == total) samples.push_back(st);
    }
    return samples;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    EnergyLedger ledger;
    bool use_ledger = cfg.scheme == Scheme::etd_vorticity;
    Trajectory samples = integrate(cfg, use_ledger ? &ledger : nullptr);

    // monitor records keyed by (record name, time)
    std::vector<std::string> ordered_records;
    std::map<std::string, std::map<double, BoundRecord>> by_name;
    std::vector<ConstantFit> fits;
    std::ostringstream res_stamp;
    res_stamp << cfg.grid.n1 << "x" << cfg.grid.n2;
    for (const auto& mon : cfg.monitors) {
        auto records = run_monitor(mon, samples, cfg);
        for (const auto& rn : record_names(mon)) {
            ordered_records.push_back(rn);
            std::vector<BoundRecord> of_name;
            for (const auto& r : records)
                if (r.name == rn) {
                    by_name[rn][r.t] = r;
                    of_name.push_back(r);
                }
            fits.push_back(ConstantFit::from_records(fit_name_for(rn), of_name,
                                                     "single run (" + cfg.ic.family + ")",
                                                     res_stamp.str()));
        }
    }

    RunOutput out;
    out.csv_path = (fs::path(out_dir) / "diagnostics.csv").string();
    {
        std::ofstream f(out.csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out.csv_path);
        CsvWriter csv(f);
        std::vector<std::string> header = {"t", "sup_u", "sup_omega", "energy",
                                           "enstrophy"};
        for (const auto& rn : ordered_records) {
            header.push_back(rn + "_lhs");
            header.push_back(rn + "_rhs");
            header.push_back(rn + "_ratio");
        }
        csv.header(header);
        for (const auto& st : samples) {
            std::vector<double> row = {st.t, st.u.max_norm(), st.omega.max_abs(),
                                       kinetic_energy(st.u), enstrophy_of(st.omega)};
            for (const auto& rn : ordered_records) {
                auto it = by_name[rn].find(st.t);
                if (it == by_name[rn].end()) {
                    row.insert(row.end(), {0.0, 0.0, 0.0});
                } else {
                    row.insert(row.end(),
                               {it->second.lhs, it->second.rhs_shape, it->second.ratio});
                }
            }
            csv.numeric_row(row);
        }
    }

    // snapshots at the nearest sampled times
    for (size_t si = 0; si < cfg.snapshot_times.size(); ++si) {
        double want = cfg.snapshot_times[si];
        const SolverState* best = &samples.front();
        for (const auto& st : samples)
            if (std::abs(st.t - want) < std::abs(best->t - want)) best = &st;
        Snapshot snap;
        snap.grid = cfg.grid;
        snap.t = best->t;
        snap.fields.emplace_back("omega", best->omega);
        snap.fields.emplace_back("u1", best->u.u1());
        snap.fields.emplace_back("u2", best->u.u2());
        std::ostringstream name;
        name << "snapshot_" << si << ".nsul";
        write_snapshot((fs::path(out_dir) / name.str()).string(), snap);
    }

    out.energy_residual = use_ledger ? ledger.residual() : 0.0;
    out.fits = std::move(fits);
    out.samples = std::move(samples);
    out.manifest_path = (fs::path(out_dir) / "manifest.txt").string();
    {
        std::ofstream mf(out.manifest_path, std::ios::binary);
        mf << "# run manifest (config echo, reproducible)\n";
        mf << config_echo(cfg);
        mf << "# code_version = 1\n";
        mf << "# energy_residual = " << format_double(out.energy_residual) << "\n";
        for (const auto& fit : out.fits)
            mf << "# fit " << fit.name << " = " << format_double(fit.value) << " ["
               << fit.ensemble << ", " << fit.resolution << "]\n";
    }
    return out;
}

std::vector<ConstantFit> run_ensemble(const ExperimentConfig& cfg, int count,
                                      std::uint64_t seed, const std::string& out_dir) {
    if (count < 1) throw std::invalid_argument("run_ensemble: count must be >= 1");
    fs::create_directories(out_dir);
    std::vector<std::future<RunOutput>> futures;
    for (int i = 0; i < count; ++i) {
        ExperimentConfig member = cfg;
        member.ic.family = "random_bandlimited";
        member.ic.seed = seed + static_cast<std::uint64_t>(i);
        std::ostringstream dir;
        dir << out_dir << "/member_" << i;
        futures.push_back(std::async(std::launch::async, [member, d = dir.str()]() {
            return run_experiment(member, d);
        }));
    }
    std::vector<ConstantFit> fits;
    for (int i = 0; i < count; ++i) {
        RunOutput out;
        try {
            out = futures[i].get();
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "ensemble member " << i << " failed: " << e.what();
            throw std::runtime_error(msg.str());
        }
        if (fits.empty()) {
            fits = out.fits;
            for (auto& f : fits) f.ensemble = "ensemble of " + std::to_string(count);
        } else {
            for (size_t j = 0; j < fits.size(); ++j) fits[j].absorb(out.fits[j]);
        }
    }
    std::ofstream f(fs::path(out_dir) / "fits.csv", std::ios::binary);
    CsvWriter csv(f);
    csv.header({"name", "value", "ensemble", "resolution"});
    for (const auto& fit : fits)
        csv.row({fit.name, format_double(fit.value), fit.ensemble, fit.resolution});
    return fits;
}

LadderReport run_ladder(const ExperimentConfig& cfg, int levels,
                        const std::string& out_dir) {
    if (levels < 2) throw std::invalid_argument("run_ladder: need at least 2 levels");
    fs::create_directories(out_dir);
    LadderReport rep;
    rep.kind = cfg.ladder_kind;

    if (cfg.ladder_kind == "exact") {
        for (int lvl = 0; lvl < levels; ++lvl) {
            ExperimentConfig c = cfg;
            c.grid.n1 = cfg.grid.n1 << lvl;
            c.grid.n2 = cfg.grid.n2 << lvl;
            c.ic.family = "taylor_green";
            SolverState st = build_initial_state(c.ic, c.grid, c.u_inf);
            VectorField u0 = st.u;
            SolverConfig sc = c.solver();
            int total = static_cast<int>(std::llround(c.t_end / c.dt));
            for (int s = 0; s < total; ++s) vorticity_step(st, sc);
            double decay = std::exp(-2.0 * c.nu * st.t);
            double err = 0.0;
            for (int i = 0; i < c.grid.size(); ++i) {
                err = std::max(err, std::abs(st.u.u1()[i] - decay * u0.u1()[i]));
                err = std::max(err, std::abs(st.u.u2()[i] - decay * u0.u2()[i]));
            }
            rep.params.push_back(c.grid.n1);
            rep.errors.push_back(err / (c.ic.amplitude * decay));
        }
    } else if (cfg.ladder_kind == "bs") {
        ScalarField omega = random_bandlimited_field(cfg.grid, cfg.ic.kmin, cfg.ic.kmax,
                                                     cfg.ic.amplitude, cfg.ic.seed);
        double rmax = 0.25 * std::min(cfg.grid.l1, cfg.grid.l2);
        std::vector<double> radii;
        for (int lvl = levels - 1; lvl >= 0; --lvl)
            radii.push_back(rmax / static_cast<double>(1 << lvl));
        Point x{0.5 * cfg.grid.l1 + cfg.grid.l1 / 8.0, 0.5 * cfg.grid.l2};
        TruncationStudy st = truncation_study(omega, x, radii);
        for (size_t i = 0; i < radii.size(); ++i) {
            double e1 = st.values[i][0] - st.reference[0];
            double e2 = st.values[i][1] - st.reference[1];
            rep.params.push_back(radii[i]);
            rep.errors.push_back(std::sqrt(e1 * e1 + e2 * e2));
        }
        rep.order = st.convergence_order();
    } else if (cfg.ladder_kind == "qdecomp") {
        for (int lvl = 0; lvl < levels; ++lvl) {
            ExperimentConfig c = cfg;
            c.grid.n1 = cfg.grid.n1 << lvl;
            c.grid.n2 = cfg.grid.n2 << lvl;
            SolverState st = build_initial_state(c.ic, c.grid, c.u_inf);
            CutoffProfile cut{std::min(c.grid.l1, c.grid.l2) / 8.0};
            Point x0{0.5 * c.grid.l1, 0.5 * c.grid.l2};
            PressureDecomposition d = q_decomposition(st.u, st.omega, x0, cut);
            ScalarField q = modified_pressure(st.u);
            ScalarField diff = d.total() - q;
            rep.params.push_back(c.grid.n1);
            rep.errors.push_back(diff.max_abs() / std::max(q.max_abs(), 1e-300));
        }
    } else {
        throw std::invalid_argument("run_ladder: unknown kind '" + cfg.ladder_kind + "'");
    }

    if (rep.order == 0.0 && rep.params.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t n = rep.params.size();
        for (size_t i = 0; i < n; ++i) {
            double lx = std::log(rep.params[i]);
            double ly = std::log(std::max(rep.errors[i], 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        rep.order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    std::ofstream f(fs::path(out_dir) / "ladder.csv", std::ios::binary);
    CsvWriter csv(f);
    csv.header({"level", "param", "error"});
    for (size_t i = 0; i < rep.params.size(); ++i)
        csv.numeric_row({static_cast<double>(i), rep.params[i], rep.errors[i]});
    return rep;
}

}  // namespace nsul
