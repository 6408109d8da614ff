#pragma once

#include "nsul/evolve.hpp"

#include <string>
#include <vector>

namespace nsul {

struct BoundRecord {
    std::string name;
    double t = 0.0;
    double lhs = 0.0;        // observed quantity
    double rhs_shape = 0.0;  // structural bound with unit constant
    double ratio = 0.0;
    bool saturated = false;  // observation radius clipped by the torus
};

/// Candidate value for one of the paper-style universal constants,
/// obtained as a sup of observed ratios (never asserted).
struct ConstantFit {
    std::string name;
    double value = 0.0;
    std::string ensemble;    // what was measured
    std::string resolution;  // grid stamp

    /// Sup of ratios over a record series, skipping saturated entries.
    static ConstantFit from_records(const std::string& name,
                                    const std::vector<BoundRecord>& records,
                                    const std::string& ensemble,
                                    const std::string& resolution);
    void absorb(const ConstantFit& other);  // max-combine across members
};

using Trajectory = std::vector<SolverState>;

/// Observation radius max{R0, c7 sqrt(nu t), c7 ||u0|| ||w0|| t^2},
/// R0 = ||u0||_inf / ||w0||_inf. Rejects vanishing initial vorticity.
double radius_schedule(double t, double nu, double u0_inf_norm,
                       double omega0_inf_norm, double c7 = 1.0);

/// ||u(t)||_inf against ||u0||_inf exp(||w0||_inf t).
std::vector<BoundRecord> monitor_thm1(const Trajectory& traj);

/// ||u(t)||_inf against the linear shape ||u0||_inf (1 + ||w0||_inf t),
/// plus the refined shape with the extra (sqrt(nu t)/R0)^{1/2} term
/// (records named "thm2" and "thm2_refined").
std::vector<BoundRecord> monitor_thm2(const Trajectory& traj, double nu);

/// Z_R(t) against R ||u0||_inf with R from radius_schedule; records are
/// flagged saturated once R outgrows min(l1,l2)/4 (radius then clipped).
std::vector<BoundRecord> monitor_ul_energy(const Trajectory& traj, double nu,
                                           double c7 = 1.0);

/// Local enstrophy sup_x ||w(t)||^2_{L2(B_x^R)} against the shape
/// ||u0||^2 (1 + R^2/(nu t) + R t ||w0||/sqrt(nu t)) ("enstrophy") and the
/// area-normalized variant against ||u0||^2/(nu t) ("enstrophy_norm").
std::vector<BoundRecord> monitor_enstrophy(const Trajectory& traj, double nu,
                                           double c7 = 1.0);

/// Strip-domain bound ||u||_inf + sqrt(nu t)||w||_inf against
/// ||u0||_inf (1 + Ru^5), Ru = l2 ||u0||_inf / nu. Requires l1 >= 4 l2.
std::vector<BoundRecord> monitor_thm3(const Trajectory& traj, double nu);

struct GronwallReport {
    bool hypothesis_holds = false;  // f + int g <= a + int b f at every node
    bool conclusion_holds = false;  // f + int g <= a exp(int b) at every node
    double worst_hypothesis_margin = 0.0;  // max lhs - rhs (positive = violated)
    double worst_conclusion_margin = 0.0;
};

/// Discrete check of the integral Gronwall lemma on a shared time grid
/// (trapezoid integrals, tolerance `tol` on both comparisons).
GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& f,
                              const std::vector<double>& g, const std::vector<double>& b,
                              double a, double tol = 1e-8);

struct HeatSample {
    double t = 0.0;
    ScalarField u;
};

/// Pure-diffusion estimates: "heat_exp" compares
/// int rho_R u(t)^2 + nu int_0^t int rho_R |grad u|^2 against
/// (int rho_R u0^2) e^{nu t / R^2} (a pathwise bound with unit constant,
/// rho_R = e^{-|x|/R} about the domain center); "heat_ball" compares
/// sup_x R(t)^{-2} int_{B_x^{R(t)}} u^2 with R(t) = sqrt(1+t) against
/// the initial uniformly local L2 mass squared.
std::vector<BoundRecord> monitor_heat_ul(const std::vector<HeatSample>& traj, double nu,
                                         double rho_radius);

}  // namespace nsul
