#pragma once

#include "nsul/evolve.hpp"

#include <cstdint>
#include <string>

namespace nsul {

/// Named initial-condition families for runs and ensembles.
struct InitialConditionSpec {
    std::string family = "taylor_green";
    double amplitude = 1.0;
    double u1 = 0.0, u2 = 0.0;   // constant family
    double sigma = 1.0;          // lamb_oseen: initial Gaussian variance parameter
    double circulation = 1.0;    // lamb_oseen peak scale
    int kmin = 1, kmax = 4;      // random_bandlimited mode band (integer modes)
    std::uint64_t seed = 1;
};

VectorField taylor_green_velocity(const GridSpec& g, double amplitude);

/// Centered Gaussian vorticity amplitude * exp(-r^2/(4 sigma)), grid mean
/// subtracted so the torus Biot-Savart applies; under pure diffusion the
/// Gaussian part evolves by sigma -> sigma + nu t.
ScalarField lamb_oseen_vorticity(const GridSpec& g, double amplitude, double sigma);

/// Mean-zero random field with integer mode magnitudes in [kmin, kmax],
/// normalized to max_abs = amplitude. Deterministic in the seed.
ScalarField random_bandlimited_field(const GridSpec& g, int kmin, int kmax,
                                     double amplitude, std::uint64_t seed);

/// Shear profile (amplitude sin(2 pi x2 / l2), 0).
VectorField shear_velocity(const GridSpec& g, double amplitude);

SolverState build_initial_state(const InitialConditionSpec& spec, const GridSpec& g,
                                const Vec2& u_inf);

}  // namespace nsul
