#include "tame/weights.hpp"

#include <cmath>

namespace tame {
namespace {

double kk_sum(int k_max) {
    double s = 0.0;
    for (int k = 1; k <= k_max; ++k) s += std::pow(static_cast<double>(k), -k);
    return s;
}

}  // namespace

namespace {

WeightSequence build_weights_impl(const GradedElement& y, const TameProblem& p,
                                  const NormFamily& family, double R_prime, bool checked) {
    if (!(R_prime > 0.0)) throw std::invalid_argument("build_weights: R' must be positive");
    if (checked && !(R_prime < p.R()))
        throw std::invalid_argument("build_weights: need R' < R");
    if (!p.constants().ready())
        throw std::logic_error("build_weights: tame constants not set; estimate them first");

    const int k_max = family.k_max;
    const int k0 = p.k0(), d1 = p.d1(), d2 = p.d2();
    const int kc = k0 + d2;
    if (kc > k_max) throw std::invalid_argument("build_weights: k0 + d2 exceeds k_max");

    std::vector<double> ynorm(static_cast<size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) ynorm[k] = norm(y, k, family);

    const double mp_k0 = p.constants().m_prime_at(k0);
    const double budget = R_prime / mp_k0;
    if (checked && !(ynorm[kc] < budget))
        throw RadiusExceededError("build_weights: ||y||_{k0+d2} >= R'/m'_{k0}");

    // Largest dyadic h with ||y||_{k0+d2} + h * sum k^-k < R'/m'_{k0}. The
    // unchecked variant substitutes a target-scaled slack when the budget is
    // exhausted.
    double slack = budget - ynorm[kc];
    if (!(slack > 0.0)) slack = 0.1 * (ynorm[kc] + 1.0);
    const double s = kk_sum(k_max);
    double h = std::pow(2.0, 20);
    while (!(h * s < slack)) {
        h *= 0.5;
        if (h < 1e-300) throw std::logic_error("build_weights: h underflow");
    }

    WeightSequence w;
    w.h = h;
    w.k0 = k0;
    w.d1 = d1;
    w.d2 = d2;
    w.R_prime = R_prime;
    w.m_prime_k0 = mp_k0;
    w.beta.assign(static_cast<size_t>(k_max) + 1, 0.0);
    w.beta[kc] = 1.0;
    for (int k = kc + 1; k <= k_max; ++k) {
        double denom = std::max(ynorm[k], p.constants().m_at(k) * p.constants().m_prime_at(k + d1));
        if (denom <= 0.0) denom = p.constants().m_at(k) * p.constants().m_prime_at(k + d1);
        w.beta[k] = h * std::pow(static_cast<double>(k), -k) / denom;
    }
    w.alpha.assign(static_cast<size_t>(k_max - d2) + 1, 0.0);
    for (int k = 0; k + d2 <= k_max; ++k)
        w.alpha[k] = w.beta[k + d2] / p.constants().m_prime_at(k);

    for (int k = 0; k <= k_max; ++k) w.f0 += w.beta[k] * ynorm[k];
    w.radius_margin = w.beta[kc] * budget - w.f0;

    // Tail bound of the truncated summability sum at n = 3: beyond k_max each
    // term is at most h (n/k)^k, a super-geometric tail.
    const double n_ref = 3.0;
    const double first = h * std::pow(n_ref / (k_max + 1.0), k_max + 1.0);
    w.tail_bound = 2.0 * first;
    return w;
}

}  // namespace

WeightSequence build_weights(const GradedElement& y, const TameProblem& p,
                             const NormFamily& family, double R_prime) {
    return build_weights_impl(y, p, family, R_prime, /*checked=*/true);
}

WeightSequence build_weights_unchecked(const GradedElement& y, const TameProblem& p,
                                       const NormFamily& family, double R_prime) {
    return build_weights_impl(y, p, family, R_prime, /*checked=*/false);
}

SummabilityReport check_summability(const WeightSequence& w, const TameProblem& p, int n) {
    if (n < 1) throw std::invalid_argument("check_summability: n must be >= 1");
    SummabilityReport rep;
    const int k_max = static_cast<int>(w.beta.size()) - 1;
    std::vector<double> terms(static_cast<size_t>(k_max) + 1, 0.0);
    double sum = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        terms[k] = w.beta[k] * p.constants().m_at(k) * p.constants().m_prime_at(k + w.d1) *
                   std::pow(static_cast<double>(n), k);
        sum += terms[k];
        rep.partial_sums.push_back(sum);
    }
    rep.finite = true;
    for (int k = k_max - 3; k <= k_max; ++k) {
        if (k < 1) continue;
        if (terms[k] > 0.5 * terms[k - 1] && terms[k] > 0.0) rep.finite = false;
    }
    return rep;
}

double merit(const TameProblem& p, const WeightSequence& w, const NormFamily& family,
             const GradedElement& x, const GradedElement& y) {
    GradedElement r = p.eval_F(x) - y;
    double f = 0.0;
    for (int k = 0; k < static_cast<int>(w.beta.size()); ++k) {
        if (w.beta[k] == 0.0) continue;
        f += w.beta[k] * norm(r, k, family);
    }
    return f;
}

double ekeland_ratio(const WeightSequence& w, double f0, double R_prime) {
    if (!(R_prime > 0.0)) throw std::invalid_argument("ekeland_ratio: R' must be positive");
    if (w.k0 >= static_cast<int>(w.alpha.size()) || w.alpha[w.k0] <= 0.0)
        throw std::invalid_argument("ekeland_ratio: alpha_{k0} is zero");
    return f0 / (R_prime * w.alpha[w.k0]);
}

double radius_condition_margin(const WeightSequence& w, const GradedElement& y,
                               const NormFamily& family) {
    double lhs = 0.0;
    for (int k = 0; k < static_cast<int>(w.beta.size()); ++k) {
        if (w.beta[k] == 0.0) continue;
        lhs += w.beta[k] * norm(y, k, family);
    }
    return w.beta[w.k0 + w.d2] * w.R_prime / w.m_prime_k0 - lhs;
}

}  // namespace tame
