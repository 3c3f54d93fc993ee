#include "tame/element.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace tame {
namespace {

// fftw planning is not thread-safe; plans are cached per (size, direction)
// and created with FFTW_UNALIGNED so the new-array execute interface accepts
// arbitrary buffers.
fftw_plan plan_for(int n, int sign) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> buf(static_cast<size_t>(n));
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

void dft_inplace(int n, std::complex<double>* data, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan_for(n, sign), p, p);
}

// i^p for integer p >= 0.
std::complex<double> i_pow(int p) {
    switch (p % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

GradedElement::GradedElement(int dim, int n_grid) : dim_(dim), n_(n_grid) {
    if (dim < 1) throw std::invalid_argument("GradedElement: dim must be positive");
    if (n_grid < 2 || n_grid % 2 != 0)
        throw std::invalid_argument("GradedElement: n_grid must be positive and even");
    samples_.assign(static_cast<size_t>(dim) * n_grid, 0.0);
    coeffs_.assign(static_cast<size_t>(dim) * n_grid, {0.0, 0.0});
}

GradedElement GradedElement::from_samples(int dim, int n_grid, std::vector<double> samples) {
    GradedElement e(dim, n_grid);
    if (samples.size() != e.samples_.size())
        throw std::invalid_argument("from_samples: wrong sample count");
    e.samples_ = std::move(samples);
    if (!e.all_finite()) throw std::domain_error("from_samples: non-finite entries");
    e.sync_from_samples();
    return e;
}

GradedElement GradedElement::from_modes(int dim, int n_grid, std::vector<Complex> coeffs) {
    GradedElement e(dim, n_grid);
    if (coeffs.size() != e.coeffs_.size())
        throw std::invalid_argument("from_modes: wrong coefficient count");
    // Symmetrize so the represented function is exactly real.
    const int n = n_grid;
    for (int c = 0; c < dim; ++c) {
        const size_t base = static_cast<size_t>(c) * n;
        for (int j = 0; j < n; ++j) {
            int jc = (n - j) % n;
            if (j > jc) continue;
            Complex a = coeffs[base + j];
            Complex b = coeffs[base + jc];
            Complex sym = 0.5 * (a + std::conj(b));
            e.coeffs_[base + j] = sym;
            e.coeffs_[base + jc] = std::conj(sym);
        }
    }
    e.sync_from_coeffs();
    if (!e.all_finite()) throw std::domain_error("from_modes: non-finite entries");
    return e;
}

GradedElement::Complex GradedElement::mode(int comp, int m) const {
    if (m < -n_ / 2 || m > n_ / 2) return {0.0, 0.0};
    return coeffs_[static_cast<size_t>(comp) * n_ + bin_of_mode(m == n_ / 2 ? -n_ / 2 : m, n_)];
}

void GradedElement::sync_from_samples() {
    std::vector<Complex> buf(static_cast<size_t>(n_));
    for (int c = 0; c < dim_; ++c) {
        const size_t base = static_cast<size_t>(c) * n_;
        for (int j = 0; j < n_; ++j) buf[j] = samples_[base + j];
        dft_inplace(n_, buf.data(), FFTW_FORWARD);
        const double inv_n = 1.0 / n_;
        for (int j = 0; j < n_; ++j) coeffs_[base + j] = buf[j] * inv_n;
    }
}

void GradedElement::sync_from_coeffs() {
    std::vector<Complex> buf(static_cast<size_t>(n_));
    for (int c = 0; c < dim_; ++c) {
        const size_t base = static_cast<size_t>(c) * n_;
        for (int j = 0; j < n_; ++j) buf[j] = coeffs_[base + j];
        dft_inplace(n_, buf.data(), FFTW_BACKWARD);
        for (int j = 0; j < n_; ++j) samples_[base + j] = buf[j].real();
    }
}

GradedElement GradedElement::derivative(int p) const {
    if (p < 0) throw std::invalid_argument("derivative: order must be non-negative");
    if (p == 0) return *this;
    GradedElement out(dim_, n_);
    const Complex ip = i_pow(p);
    for (int c = 0; c < dim_; ++c) {
        const size_t base = static_cast<size_t>(c) * n_;
        for (int j = 0; j < n_; ++j) {
            int m = mode_of_bin(j, n_);
            // The shared +-n/2 bin is annihilated so that the result stays
            // real for odd p and differentiation composes exactly.
            Complex factor = (j == n_ / 2) ? Complex{0.0, 0.0}
                                           : ip * std::pow(static_cast<double>(m), p);
            out.coeffs_[base + j] = coeffs_[base + j] * factor;
        }
    }
    out.sync_from_coeffs();
    return out;
}

GradedElement GradedElement::pointwise_product(const GradedElement& other) const {
    check_shape(other);
    const int n2 = 2 * n_;
    GradedElement out(dim_, n_);
    std::vector<Complex> a(static_cast<size_t>(n2)), b(static_cast<size_t>(n2));
    auto embed = [&](const std::vector<Complex>& src, size_t base, std::vector<Complex>& dst) {
        std::fill(dst.begin(), dst.end(), Complex{0.0, 0.0});
        for (int j = 0; j < n_; ++j) {
            int m = mode_of_bin(j, n_);
            if (j == n_ / 2) {
                // Split the shared Nyquist coefficient across +-n/2.
                dst[bin_of_mode(n_ / 2, n2)] += 0.5 * src[base + j];
                dst[bin_of_mode(-n_ / 2, n2)] += 0.5 * src[base + j];
            } else {
                dst[bin_of_mode(m, n2)] = src[base + j];
            }
        }
    };
    for (int c = 0; c < dim_; ++c) {
        const size_t base = static_cast<size_t>(c) * n_;
        embed(coeffs_, base, a);
        embed(other.coeffs_, base, b);
        dft_inplace(n2, a.data(), FFTW_BACKWARD);
        dft_inplace(n2, b.data(), FFTW_BACKWARD);
        for (int j = 0; j < n2; ++j) a[j] = Complex{a[j].real() * b[j].real(), 0.0};
        dft_inplace(n2, a.data(), FFTW_FORWARD);
        const double inv = 1.0 / n2;
        for (int m = -n_ / 2 + 1; m < n_ / 2; ++m)
            out.coeffs_[base + bin_of_mode(m, n_)] = a[bin_of_mode(m, n2)] * inv;
        // Modes +-n/2 fold into the shared bin on the coarse grid.
        out.coeffs_[base + n_ / 2] =
            (a[bin_of_mode(n_ / 2, n2)] + a[bin_of_mode(-n_ / 2, n2)]) * inv;
    }
    out.sync_from_coeffs();
    return out;
}

GradedElement& GradedElement::operator+=(const GradedElement& other) {
    check_shape(other);
    for (size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

GradedElement& GradedElement::operator-=(const GradedElement& other) {
    check_shape(other);
    for (size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

GradedElement& GradedElement::operator*=(double c) {
    for (auto& s : samples_) s *= c;
    for (auto& z : coeffs_) z *= c;
    return *this;
}

bool GradedElement::all_finite() const {
    for (double s : samples_)
        if (!std::isfinite(s)) return false;
    for (const auto& z : coeffs_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double GradedElement::max_abs_sample() const {
    double best = 0.0;
    for (double s : samples_) best = std::max(best, std::abs(s));
    return best;
}

double GradedElement::representation_error() const {
    GradedElement copy = *this;
    copy.sync_from_coeffs();
    double err = 0.0;
    for (size_t i = 0; i < samples_.size(); ++i)
        err = std::max(err, std::abs(copy.samples_[i] - samples_[i]));
    return err;
}

void GradedElement::check_shape(const GradedElement& other) const {
    if (dim_ != other.dim_ || n_ != other.n_)
        throw std::invalid_argument("GradedElement: shape mismatch");
}

// Builders place exact Fourier coefficients; sampling trig functions and
// transforming would smear roundoff across all bins, which high-order
// derivatives then amplify by |m|^p.
GradedElement constant_element(int dim, int n_grid, double value) {
    std::vector<GradedElement::Complex> c(static_cast<size_t>(dim) * n_grid, {0.0, 0.0});
    for (int comp = 0; comp < dim; ++comp)
        c[static_cast<size_t>(comp) * n_grid] = {value, 0.0};
    return GradedElement::from_modes(dim, n_grid, std::move(c));
}

GradedElement mode_element(int dim, int n_grid, int m, double amp_cos, double amp_sin) {
    if (m < 0 || m > n_grid / 2)
        throw std::invalid_argument("mode_element: mode outside the representable band");
    std::vector<GradedElement::Complex> c(static_cast<size_t>(dim) * n_grid, {0.0, 0.0});
    for (int comp = 0; comp < dim; ++comp) {
        const size_t base = static_cast<size_t>(comp) * n_grid;
        if (m == 0) {
            c[base] = {amp_cos, 0.0};
        } else if (m == n_grid / 2) {
            c[base + m] = {amp_cos, 0.0};  // sin at the Nyquist mode samples to zero
        } else {
            c[base + GradedElement::bin_of_mode(m, n_grid)] = {0.5 * amp_cos, -0.5 * amp_sin};
            c[base + GradedElement::bin_of_mode(-m, n_grid)] = {0.5 * amp_cos, 0.5 * amp_sin};
        }
    }
    return GradedElement::from_modes(dim, n_grid, std::move(c));
}

}  // namespace tame
