#pragma once

#include "nsul/bounds.hpp"
#include "nsul/config.hpp"

#include <string>
#include <vector>

namespace nsul {

struct RunOutput {
    Trajectory samples;              // states at the diagnostic output times
    std::vector<ConstantFit> fits;   // one per monitored record name
    double energy_residual = 0.0;    // |E + D - E0| / E0 over the run
    std::string csv_path;
    std::string manifest_path;
};

/// Single run driven by the config: integrates with the configured scheme,
/// streams diagnostics to <out_dir>/diagnostics.csv (one lhs/rhs/ratio
/// triple per monitored record), writes snapshots at the configured times
/// and a manifest sufficient to reproduce the run.
RunOutput run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// `count` independent members with seeds seed, seed+1, ...; the initial
/// condition family is forced to random_bandlimited. Members run
/// concurrently; fits are max-combined in member order and written to
/// <out_dir>/fits.csv. Any member failure aborts naming the member.
std::vector<ConstantFit> run_ensemble(const ExperimentConfig& cfg, int count,
                                      std::uint64_t seed, const std::string& out_dir);

struct LadderReport {
    std::string kind;
    std::vector<double> params;  // grid size or truncation radius per level
    std::vector<double> errors;
    double order = 0.0;  // least-squares slope of log error vs log param
};

/// Dyadic refinement study: kind "exact" (Taylor-Green error vs the exact
/// decay at increasing n), "bs" (truncated Biot-Savart error vs radius),
/// or "qdecomp" (pressure-decomposition error vs n).
LadderReport run_ladder(const ExperimentConfig& cfg, int levels,
                        const std::string& out_dir);

}  // namespace nsul
