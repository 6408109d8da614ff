#pragma once

#include "nsul/field.hpp"

namespace nsul {

/// Forward transform (unnormalized DFT; matches the convention that the
/// k=0 coefficient is the grid mean times n1*n2). Rejects non-finite input.
Spectrum to_spectral(const ScalarField& f);

/// Inverse transform. The imaginary residual after inversion is discarded;
/// inputs are expected to be Hermitian-symmetric.
ScalarField to_physical(const Spectrum& s);

/// Heat semigroup multiplier e^{-tau |k|^2}. tau >= 0 required.
Spectrum heat_propagate(const Spectrum& s, double tau);

/// Spectral derivative (i k_axis)^order, axis in {1,2}, 1 <= order <= 4.
/// Odd orders zero the Nyquist modes so the result stays real.
Spectrum derivative(const Spectrum& s, int axis, int order = 1);

/// Riesz transform i k_axis / |k|; the k=0 coefficient is set to zero.
Spectrum riesz(const Spectrum& s, int axis);

/// Leray-Hopf projection onto divergence-free fields. The k=0 mode (and
/// u_inf) passes through unchanged.
VectorField leray_project(const VectorField& v);

/// Smooth radial low-pass Q_delta: identity for |k| <= delta, zero for
/// |k| >= 2 delta. The cutoff profile is documented in cutoff_chi_hat.
VectorField low_pass(const VectorField& v, double delta);

/// The radial cutoff profile used by low_pass: 1 for r <= 1, 0 for r >= 2,
/// exp(1 - 1/(1-s^2)) with s = r-1 in between.
double cutoff_chi_hat(double r);

/// 2/3-rule mask applied in place (also zeroes the Nyquist lines).
void dealias(Spectrum& s);

/// Dealiased pointwise product of two fields.
ScalarField dealiased_product(const ScalarField& a, const ScalarField& b);

/// Scalar vorticity curl u = d1 u2 - d2 u1.
ScalarField curl(const VectorField& u);

/// Spectral divergence, returned as a spectrum (for residual norms).
Spectrum divergence_spectrum(const VectorField& u);

/// Relative spectral divergence norm ||div u|| / ||u||; zero field gives 0.
double relative_divergence(const VectorField& u);

/// P(u . grad u) = div . P(u x u) with dealiased products. Rejects input
/// whose relative spectral divergence exceeds 1e-8.
VectorField nonlinear_term(const VectorField& u);

/// Same quantity through the rotational identity P(u^perp omega); used as
/// an independent route for consistency checks.
VectorField nonlinear_term_rotational(const VectorField& u);

/// Gradient of a scalar spectrum as a physical vector field.
VectorField gradient(const Spectrum& s);

}  // namespace nsul
