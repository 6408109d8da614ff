#include "nsul/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsul {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

void GridSpec::validate() const {
    if (n1 < 8 || n2 < 8 || n1 % 2 != 0 || n2 % 2 != 0)
        throw std::invalid_argument("GridSpec: n1, n2 must be even and >= 8");
    if (!(l1 > 0.0) || !(l2 > 0.0))
        throw std::invalid_argument("GridSpec: l1, l2 must be positive");
    if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
        throw std::invalid_argument("GridSpec: dealias_fraction in (0,1]");
}

double GridSpec::k1(int m1) const { return two_pi * signed_mode(m1, n1) / l1; }
double GridSpec::k2(int m2) const { return two_pi * signed_mode(m2, n2) / l2; }

ScalarField::ScalarField(const GridSpec& grid, double fill)
    : grid_(grid), values_(static_cast<size_t>(grid.size()), fill) {
    grid_.validate();
}

bool ScalarField::finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

void ScalarField::require_finite(const char* what) const {
    if (!finite())
        throw std::invalid_argument(std::string(what) + ": non-finite field values");
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / values_.size();
}

double ScalarField::integral() const { return mean() * grid_.l1 * grid_.l2; }

double ScalarField::l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s * grid_.cell_area());
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField pointwise(const ScalarField& a, const ScalarField& b) {
    ScalarField r(a.grid());
    for (int i = 0; i < a.grid().size(); ++i) r[i] = a[i] * b[i];
    return r;
}

VectorField::VectorField(const GridSpec& grid) : u1_(grid), u2_(grid) {}

double VectorField::max_norm() const {
    double m = 0.0;
    for (int i = 0; i < grid().size(); ++i) {
        double a = u1_[i] + u_inf_[0];
        double b = u2_[i] + u_inf_[1];
        m = std::max(m, std::sqrt(a * a + b * b));
    }
    return m;
}

double VectorField::max_norm_fluctuation() const {
    double m = 0.0;
    for (int i = 0; i < grid().size(); ++i)
        m = std::max(m, std::sqrt(u1_[i] * u1_[i] + u2_[i] * u2_[i]));
    return m;
}

void VectorField::require_finite(const char* what) const {
    u1_.require_finite(what);
    u2_.require_finite(what);
    if (!std::isfinite(u_inf_[0]) || !std::isfinite(u_inf_[1]))
        throw std::invalid_argument(std::string(what) + ": non-finite u_inf");
}

Spectrum::Spectrum(const GridSpec& grid)
    : grid_(grid), coeffs_(static_cast<size_t>(grid.size())) {
    grid_.validate();
}

double Spectrum::l2_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

double Spectrum::hermitian_defect() const {
    double scale = 0.0;
    for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (int m2 = 0; m2 < grid_.n2; ++m2) {
        int n2m = (grid_.n2 - m2) % grid_.n2;
        for (int m1 = 0; m1 < grid_.n1; ++m1) {
            int n1m = (grid_.n1 - m1) % grid_.n1;
            auto d = coeffs_[grid_.index(m1, m2)] -
                     std::conj(coeffs_[grid_.index(n1m, n2m)]);
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst / scale;
}

double wrap_delta(double a, double b, double l) {
    double d = std::fmod(a - b, l);
    if (d > 0.5 * l) d -= l;
    if (d < -0.5 * l) d += l;
    return d;
}

Point wrap_delta(const Point& p, const Point& q, const GridSpec& g) {
    return {wrap_delta(p.x1, q.x1, g.l1), wrap_delta(p.x2, q.x2, g.l2)};
}

}  // namespace nsul
