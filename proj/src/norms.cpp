#include "tame/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace tame {

double norm(const GradedElement& x, int k, const NormFamily& family) {
    if (k < 0 || k > family.k_max) throw std::out_of_range("norm: k out of range");
    if (!x.all_finite()) throw std::domain_error("norm: non-finite element");
    if (family.flavor == NormFlavor::SupCk) {
        double best = 0.0;
        for (int p = 0; p <= k; ++p) best = std::max(best, x.derivative(p).max_abs_sample());
        return best;
    }
    const double weight = 2.0 * M_PI / x.n_grid();
    double sum = 0.0;
    for (int p = 0; p <= k; ++p) {
        GradedElement d = x.derivative(p);
        double acc = 0.0;
        for (double s : d.samples()) acc += s * s;
        sum += weight * acc;
    }
    return std::sqrt(sum);
}

double hk_inner(const GradedElement& a, const GradedElement& b, int k) {
    const double weight = 2.0 * M_PI / a.n_grid();
    double sum = 0.0;
    for (int p = 0; p <= k; ++p) {
        GradedElement da = a.derivative(p);
        GradedElement db = b.derivative(p);
        double acc = 0.0;
        for (size_t i = 0; i < da.samples().size(); ++i) acc += da.samples()[i] * db.samples()[i];
        sum += weight * acc;
    }
    return sum;
}

FrechetMetric make_default_metric(int k_max, double r) {
    if (k_max < 1) throw std::invalid_argument("make_default_metric: k_max must be >= 1");
    if (r <= 0) throw std::invalid_argument("make_default_metric: r must be positive");
    FrechetMetric m;
    m.r = r;
    m.alpha.resize(static_cast<size_t>(k_max) + 1);
    m.alpha[0] = 1.0;
    for (int k = 1; k <= k_max; ++k) m.alpha[k] = std::pow(static_cast<double>(k), -k);
    m.tail_bound = 2.0 * std::pow(static_cast<double>(k_max) + 1.0, -(k_max + 1.0));
    return m;
}

double metric_distance(const GradedElement& x1, const GradedElement& x2,
                       const FrechetMetric& metric, const NormFamily& family) {
    if (x1.dim() != x2.dim() || x1.n_grid() != x2.n_grid())
        throw std::invalid_argument("metric_distance: shape mismatch");
    GradedElement diff = x1 - x2;
    double d = 0.0;
    const int k_top = std::min<int>(family.k_max, static_cast<int>(metric.alpha.size()) - 1);
    for (int k = 0; k <= k_top; ++k) {
        if (metric.alpha[k] == 0.0) continue;
        d += metric.alpha[k] * std::min(metric.r, norm(diff, k, family));
    }
    return d;
}

ControlledConstant controlled_constant(const GradedElement& x, const NormFamily& family) {
    ControlledConstant result;
    double c0 = 0.0;
    for (int k = 1; k <= family.k_max; ++k)
        c0 = std::max(c0, std::pow(norm(x, k, family), 1.0 / k));
    result.c0 = c0;
    result.feasible = std::isfinite(c0) && norm(x, 0, family) <= 1.0;
    return result;
}

}  // namespace tame
