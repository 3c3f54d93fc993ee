#pragma once

#include <vector>

#include "tame/element.hpp"

namespace tame {

enum class NormFlavor { SupCk, SobolevHk };

struct NormFamily {
    NormFlavor flavor = NormFlavor::SobolevHk;
    int k_max = 12;
};

/// Graded norm ||x||_k: max over derivative orders p <= k of the grid sup
/// (SupCk), or sqrt of the summed quadrature integrals of squared derivatives
/// (SobolevHk). Monotone non-decreasing in k.
double norm(const GradedElement& x, int k, const NormFamily& family);

/// H^k inner product <a,b>_k = sum_{p<=k} integral of d^p a . d^p b.
double hk_inner(const GradedElement& a, const GradedElement& b, int k);

struct FrechetMetric {
    std::vector<double> alpha;  // length k_max+1
    double r = 1.0;             // clamp radius
    double tail_bound = 0.0;    // analytic bound on the truncated tail
};

// alpha_0 = 1, alpha_k = k^-k; the tail beyond k_max is below 2*(k_max+1)^-(k_max+1).
FrechetMetric make_default_metric(int k_max, double r);

double metric_distance(const GradedElement& x1, const GradedElement& x2,
                       const FrechetMetric& metric, const NormFamily& family);

struct ControlledConstant {
    double c0 = 0.0;
    bool feasible = false;
};

/// c0 = max over 1 <= k <= k_max of ||x||_k^(1/k); feasible iff additionally
/// ||x||_0 <= 1 so that ||x||_k <= c0^k holds for every computed k.
ControlledConstant controlled_constant(const GradedElement& x, const NormFamily& family);

}  // namespace tame
