#pragma once

#include "nsul/field.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nsul {

/// Translation-invariant weight for the weighted sup-convolution norms.
/// `profile` evaluates rho along a 1-D coordinate: the radius |x| when
/// dim == 2 (radial weights), or the signed coordinate when dim == 1.
/// `tail_bound(T)`, when present, bounds the envelope integral beyond
/// distance T from the origin; weights without one are screened by a
/// partial-sum growth test instead.
struct WeightFunction {
    std::string name;
    int dim = 2;
    std::function<double(double)> profile;
    std::function<double(double)> tail_bound;
};

WeightFunction weight_exponential();        // e^{-|x|}, radial, 2-D
WeightFunction weight_power(double m);      // (m+|x|)^{-m}, radial, 2-D
WeightFunction weight_spike();              // 1-D staircase sum_k k^{-1/2} 1_[-k-1/k,-k]

struct AdmissibilityReport {
    bool positive_ok = false;       // rho > 0 on a set of nonzero measure
    bool envelope_ok = false;       // sup_{|y-x|<=1} rho(y) integrable
    double envelope_integral = 0.0; // computed estimate (partial if divergent)
    std::string detail;
    bool admissible() const { return positive_ok && envelope_ok; }
};

AdmissibilityReport admissibility_check(const WeightFunction& w);

/// sup over all grid nodes x of (int_{|y-x| <= ball_radius} |f|^p dy)^{1/p},
/// balls wrapping periodically. ball_radius <= min(l1,l2)/4.
double ul_norm(const ScalarField& f, double p, double ball_radius = 1.0);

/// sup over grid nodes x of (sum_y rho(|x-y|) |f(y)|^p dy)^{1/p} with the
/// minimal-image distance; rejects inadmissible weights naming the failed
/// assumption. The weight tail beyond the fundamental domain is dropped.
double weighted_norm(const ScalarField& f, double p, const WeightFunction& w);

/// Smooth bump phi = psi^2 with phi = 1 on B(center,R), phi = 0 outside
/// B(center,2R); satisfies |grad phi| <= c3() * sqrt(phi) pointwise.
class LocalizationBump {
  public:
    LocalizationBump(const Point& center, double radius);

    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    double c3() const;

    double psi(double t) const;       // radial profile of sqrt(phi), t = |x-c|/R
    double dpsi(double t) const;
    double phi(const Point& x, const GridSpec& g) const;    // wrapped distance
    std::array<double, 2> grad_phi(const Point& x, const GridSpec& g) const;

    ScalarField field(const GridSpec& g) const;
    /// Requires the support disc of radius 2R to fit inside the torus.
    void require_fits(const GridSpec& g) const;

  private:
    Point center_;
    double radius_;
};

/// (1/2) int_{B(x,R)} |u_total|^2 by the midpoint rule on the wrapped ball.
double local_energy(const VectorField& u, const Point& x, double radius);

/// Z_R(u) = sup_x ||u||_{L^2(B_x^R)}, sup over all grid nodes.
double z_r(const VectorField& u, double radius);

}  // namespace nsul
