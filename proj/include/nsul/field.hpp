#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace nsul {

/// Doubly periodic rectangle [0,l1) x [0,l2) sampled on an n1 x n2 grid.
/// Wavenumbers on each axis are k = 2*pi*m/l with the integer index m
/// centered at zero.
struct GridSpec {
    int n1 = 0;
    int n2 = 0;
    double l1 = 0.0;
    double l2 = 0.0;
    double dealias_fraction = 2.0 / 3.0;

    void validate() const;

    int size() const { return n1 * n2; }
    double h1() const { return l1 / n1; }
    double h2() const { return l2 / n2; }
    double cell_area() const { return h1() * h2(); }

    /// Signed mode index for a storage index m in [0, n).
    static int signed_mode(int m, int n) { return (m <= n / 2) ? m : m - n; }

    /// Wavenumber components for the storage index (m1, m2).
    double k1(int m1) const;
    double k2(int m2) const;

    /// Grid node coordinates.
    double x1(int i1) const { return i1 * h1(); }
    double x2(int i2) const { return i2 * h2(); }

    int index(int i1, int i2) const { return i2 * n1 + i1; }

    bool same_mesh(const GridSpec& o) const {
        return n1 == o.n1 && n2 == o.n2 && l1 == o.l1 && l2 == o.l2;
    }
};

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Real-valued samples on a periodic grid, row-major (x2 slow, x1 fast).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double fill = 0.0);

    const GridSpec& grid() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double& operator()(int i1, int i2) { return values_[grid_.index(i1, i2)]; }
    double operator()(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }
    double& operator[](int i) { return values_[i]; }
    double operator[](int i) const { return values_[i]; }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    bool finite() const;
    void require_finite(const char* what) const;

    double max_abs() const;
    double mean() const;
    /// Midpoint-rule integral over the fundamental domain.
    double integral() const;
    double l2_norm() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

private:
    GridSpec grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product (no dealiasing; see spectral.hpp for dealiased products).
ScalarField pointwise(const ScalarField& a, const ScalarField& b);

/// Two-component velocity field with a constant background u_inf.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const GridSpec& grid);

    const GridSpec& grid() const { return u1_.grid(); }
    ScalarField& u1() { return u1_; }
    const ScalarField& u1() const { return u1_; }
    ScalarField& u2() { return u2_; }
    const ScalarField& u2() const { return u2_; }
    std::array<double, 2>& u_inf() { return u_inf_; }
    const std::array<double, 2>& u_inf() const { return u_inf_; }

    /// Pointwise |u| including the background constant.
    double max_norm() const;
    /// max |u - u_inf| (the mean-zero part).
    double max_norm_fluctuation() const;
    void require_finite(const char* what) const;

    /// Total sample value at node (i1,i2), component c in {0,1}.
    double total(int c, int i1, int i2) const {
        return (c == 0 ? u1_(i1, i2) : u2_(i1, i2)) + u_inf_[c];
    }

private:
    ScalarField u1_;
    ScalarField u2_;
    std::array<double, 2> u_inf_{0.0, 0.0};
};

/// Complex Fourier coefficients, same row-major layout as ScalarField,
/// unnormalized DFT convention: the k=0 coefficient equals grid mean
/// times n1*n2.
class Spectrum {
public:
    Spectrum() = default;
    explicit Spectrum(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    std::vector<std::complex<double>>& coeffs() { return coeffs_; }
    const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

    std::complex<double>& operator()(int m1, int m2) {
        return coeffs_[grid_.index(m1, m2)];
    }
    std::complex<double> operator()(int m1, int m2) const {
        return coeffs_[grid_.index(m1, m2)];
    }
    std::complex<double>& operator[](int i) { return coeffs_[i]; }
    const std::complex<double>& operator[](int i) const { return coeffs_[i]; }

    double l2_norm() const;
    /// Max deviation from Hermitian symmetry, relative to the max coefficient.
    double hermitian_defect() const;

private:
    GridSpec grid_;
    std::vector<std::complex<double>> coeffs_;
};

/// Minimal-image displacement a-b on the periodic axis of length l.
double wrap_delta(double a, double b, double l);

/// Minimal-image displacement vector p-q on the torus.
Point wrap_delta(const Point& p, const Point& q, const GridSpec& g);

}  // namespace nsul
