#pragma once

#include "nsul/evolve.hpp"
#include "nsul/initial_conditions.hpp"

#include <string>
#include <vector>

namespace nsul {

/// Everything a run needs, parsed from a flat key=value file with '#'
/// comments and section prefixes grid. / physics. / ic. / scheme. /
/// monitors. / output.; every key has a default and unknown keys are
/// rejected with their line number.
struct ExperimentConfig {
    GridSpec grid{64, 64, 2.0 * 3.14159265358979323846, 2.0 * 3.14159265358979323846};
    double nu = 0.1;
    Vec2 u_inf{0.0, 0.0};
    InitialConditionSpec ic;
    Scheme scheme = Scheme::etd_vorticity;
    double dt = 1e-3;
    double t_end = 1.0;
    std::vector<std::string> monitors;  // thm1, thm2, ul_energy, enstrophy, thm3
    double c7 = 1.0;
    int output_every = 10;              // steps between diagnostic rows
    std::string out_dir = ".";
    std::vector<double> snapshot_times;
    std::string ladder_kind = "exact";  // exact | bs | qdecomp
    int ensemble_size = 1;

    SolverConfig solver() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

/// Config echo in the same key=value syntax (parseable back).
std::string config_echo(const ExperimentConfig& cfg);

}  // namespace nsul
