#pragma once

#include "nsul/field.hpp"

#include <array>
#include <vector>

namespace nsul {

using Vec2 = std::array<double, 2>;

/// Spectral Biot-Savart law: u_hat = -i k^perp / |k|^2 omega_hat, with the
/// constant part set to u_inf. Requires mean-zero vorticity on the torus.
VectorField velocity_from_vorticity(const ScalarField& omega, const Vec2& u_inf);

/// Kernel F(x,y) = (x-y)^perp/|x-y|^2 + (y-base)^perp/|y-base|^2 relative
/// to a base point. Undefined (throws) at y = x or y = base.
Vec2 bs_kernel_f(const Point& x, const Point& y, const Point& base);

/// Symmetrized kernel G(x,y) about a base point.
Vec2 bs_kernel_g(const Point& x, const Point& y, const Point& base);

/// u(x) - u(base) by midpoint quadrature of F over the fundamental domain.
/// Cells containing a kernel singularity are omitted (O(h) error model).
Vec2 bs_weak(const ScalarField& omega, const Point& x, const Point& base);

/// Partial Biot-Savart integral over the disc |y-base| <= R. Requires
/// R <= min(l1,l2)/4.
Vec2 bs_truncated(const ScalarField& omega, const Point& x, double radius,
                  const Point& base);

/// Overload anchored at the domain center.
Vec2 bs_truncated(const ScalarField& omega, const Point& x, double radius);

/// u(c+x) + u(c-x) - 2u(c), c the domain center, via the absolutely
/// convergent kernel G integrated over the fundamental domain.
Vec2 symmetrized_difference(const ScalarField& omega, const Point& x);

Point domain_center(const GridSpec& g);

struct TruncationStudy {
    std::vector<double> radii;
    std::vector<Vec2> values;
    Vec2 reference{0.0, 0.0};

    /// Least-squares slope of log(error) vs log(1/R).
    double convergence_order() const;
};

/// Runs bs_truncated over an increasing ladder of radii against the
/// spectral reconstruction difference u(x) - u(base).
TruncationStudy truncation_study(const ScalarField& omega, const Point& x,
                                 const std::vector<double>& radii);

}  // namespace nsul
