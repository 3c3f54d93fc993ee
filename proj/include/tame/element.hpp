#pragma once

#include <complex>
#include <vector>

namespace tame {

/// Discretized smooth periodic function on [0, 2*pi): dim real components
/// sampled on a uniform grid, kept in sync with their Fourier coefficients.
/// Values are immutable once built except through the arithmetic operators,
/// which update both representations together.
class GradedElement {
public:
    using Complex = std::complex<double>;

    GradedElement() = default;
    GradedElement(int dim, int n_grid);  // zero element

    static GradedElement from_samples(int dim, int n_grid, std::vector<double> samples);
    // Coefficients in FFT bin order; input is symmetrized so the element is real.
    static GradedElement from_modes(int dim, int n_grid, std::vector<Complex> coeffs);

    int dim() const { return dim_; }
    int n_grid() const { return n_; }
    bool empty() const { return n_ == 0; }

    double sample(int comp, int j) const { return samples_[static_cast<size_t>(comp) * n_ + j]; }
    const std::vector<double>& samples() const { return samples_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    // Fourier coefficient of mode m, -n_grid/2 <= m <= n_grid/2.
    Complex mode(int comp, int m) const;

    // Spectral differentiation: mode m scaled by (i*m)^p. The shared Nyquist
    // bin is zeroed for every p >= 1 so results stay real-valued and
    // derivative(p) composed with derivative(q) equals derivative(p + q).
    GradedElement derivative(int p) const;

    // Component-wise product, dealiased by a zero-padded transform at 2x
    // resolution and truncated back to the representable band.
    GradedElement pointwise_product(const GradedElement& other) const;

    GradedElement& operator+=(const GradedElement& other);
    GradedElement& operator-=(const GradedElement& other);
    GradedElement& operator*=(double c);
    friend GradedElement operator+(GradedElement a, const GradedElement& b) { a += b; return a; }
    friend GradedElement operator-(GradedElement a, const GradedElement& b) { a -= b; return a; }
    friend GradedElement operator*(double c, GradedElement a) { a *= c; return a; }
    friend GradedElement operator-(GradedElement a) { a *= -1.0; return a; }

    bool all_finite() const;
    double max_abs_sample() const;
    // Max deviation between stored samples and the inverse transform of the
    // stored coefficients; the dual-representation consistency measure.
    double representation_error() const;

    static int mode_of_bin(int j, int n) { return j <= n / 2 ? j : j - n; }
    static int bin_of_mode(int m, int n) { return m >= 0 ? m : m + n; }

private:
    void sync_from_samples();
    void sync_from_coeffs();
    void check_shape(const GradedElement& other) const;

    int dim_ = 0;
    int n_ = 0;
    std::vector<double> samples_;   // dim x n_grid, row-major
    std::vector<Complex> coeffs_;   // dim x n_grid, FFT bin order
};

GradedElement constant_element(int dim, int n_grid, double value);
// amp_cos * cos(m w) + amp_sin * sin(m w) in every component.
GradedElement mode_element(int dim, int n_grid, int m, double amp_cos, double amp_sin);

}  // namespace tame
