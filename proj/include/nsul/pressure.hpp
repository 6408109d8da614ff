#pragma once

#include "nsul/field.hpp"
#include "nsul/ulnorm.hpp"

namespace nsul {

/// Radial cut-off: chi = 1 on |z| <= scale/2, chi = 0 on |z| >= scale,
/// a quintic smoothstep in between (C^2, monotone along rays).
struct CutoffProfile {
    double scale = 1.0;

    double chi(double rho) const;
    double dchi(double rho) const;  // radial derivative
    double chi_at(double z1, double z2) const;
    std::array<double, 2> grad_at(double z1, double z2) const;
};

/// p = sum_{k,l} R_k R_l (u_k u_l): mean-zero solution of
/// -Laplace p = div((u . grad) u), products dealiased. Rejects input whose
/// relative spectral divergence exceeds 1e-8.
ScalarField pressure_spectral(const VectorField& u);

/// Bernoulli head q = p + |u|^2 / 2 (p mean-zero), solving
/// -Laplace q = div(u^perp omega).
ScalarField modified_pressure(const VectorField& u);

struct PressureDecomposition {
    ScalarField q1, q2, q3;  // q3 holds the base-point difference term
    double q0 = 0.0;
    Point base_point;

    ScalarField total() const;  // q0 + q1 + q2 + q3
};

/// Splits q into the cut Biot-Savart part q1 (kernel chi(z) z^perp/|z|^2
/// against u omega), the annulus part q2 (kernels M_kl against u_k u_l),
/// and the far-field difference q3(x, x0) built from chi^c K_kl; q3
/// vanishes at x0 exactly and q0 anchors the sum to modified_pressure
/// at x0. Requires cutoff.scale <= min(l1,l2)/8.
PressureDecomposition q_decomposition(const VectorField& u, const ScalarField& omega,
                                      const Point& x0, const CutoffProfile& cutoff);

/// Kernels of the decomposition, exposed for direct-sum cross checks.
double kernel_m(const CutoffProfile& c, int k, int l, double z1, double z2);
double kernel_k(int k, int l, double z1, double z2);

/// Localized pressure flux int q (u . grad phi) dx over the torus.
double q_flux_term(const VectorField& u, const ScalarField& q,
                   const LocalizationBump& bump);

/// The three structural right-hand terms the flux estimate compares
/// against, with unit constants: (r/R)||omega||_inf ||u||^2_{L2(B_x0^3R)},
/// (1/(rR))||u||^3_{L2(B_x0^3R)}, (1/R^2) sup_z ||u||^3_{L2(B_z^2R)}.
std::array<double, 3> q_flux_bound_terms(const VectorField& u, const ScalarField& omega,
                                         const LocalizationBump& bump, double r);

}  // namespace nsul
