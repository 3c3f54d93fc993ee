#pragma once

#include <stdexcept>
#include <vector>

#include "tame/problem.hpp"

namespace tame {

/// Target norm exceeds the surjectivity ball: ||y||_{k0+d2} >= R'/m'_{k0}.
class RadiusExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Weight sequence beta_k for the merit function, with the derived alpha_k
/// = beta_{k+d2} / m'_k and the smallness parameter h. beta vanishes below
/// k0+d2, equals 1 there, and decays like h k^-k above, normalized by
/// max{||y||_k, m_k m'_{k+d1}}.
struct WeightSequence {
    std::vector<double> beta;   // indices 0..k_max
    std::vector<double> alpha;  // indices 0..k_max-d2
    double h = 0.0;
    int k0 = 0, d1 = 0, d2 = 0;
    double R_prime = 0.0;
    double m_prime_k0 = 0.0;
    double f0 = 0.0;            // sum_k beta_k ||y||_k for the build target
    double radius_margin = 0.0; // beta_{k0+d2} R'/m'_{k0} - f0
    double tail_bound = 0.0;    // truncated-tail bound of the summability terms at n=3
};

/// Builds the weights for target y. h is the largest dyadic 2^-j with
/// ||y||_{k0+d2} + h sum_k k^-k < R'/m'_{k0}; the radius condition then holds
/// by construction. Throws RadiusExceededError when the target is outside
/// the ball.
WeightSequence build_weights(const GradedElement& y, const TameProblem& p,
                             const NormFamily& family, double R_prime);

/// Same construction without the radius precondition or the R' < R check;
/// when the budget is exhausted h is scaled to the target instead. Only for
/// benchmark sweeps that deliberately run past the certified ball.
WeightSequence build_weights_unchecked(const GradedElement& y, const TameProblem& p,
                                       const NormFamily& family, double R_prime);

struct SummabilityReport {
    bool finite = false;
    std::vector<double> partial_sums;
};

/// Partial sums of sum_k beta_k m_k m'_{k+d1} n^k up to k_max; finite when
/// the terms decay by a factor >= 2 over the last four indices.
SummabilityReport check_summability(const WeightSequence& w, const TameProblem& p, int n);

/// Merit f(x) = sum_k beta_k ||F(x) - y||_k.
double merit(const TameProblem& p, const WeightSequence& w, const NormFamily& family,
             const GradedElement& x, const GradedElement& y);

/// A = f(0) / (R' alpha_{k0}); weights built by build_weights satisfy A < 1.
double ekeland_ratio(const WeightSequence& w, double f0, double R_prime);

/// beta_{k0+d2} R'/m'_{k0} - sum_k beta_k ||y||_k; positive iff the truncated
/// radius condition holds.
double radius_condition_margin(const WeightSequence& w, const GradedElement& y,
                               const NormFamily& family);

}  // namespace tame
