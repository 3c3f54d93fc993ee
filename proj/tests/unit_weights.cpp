#include <doctest.h>

#include <cmath>

#include "tame/weights.hpp"

using namespace tame;

namespace {

const NormFamily kHk{NormFlavor::SobolevHk, 12};

std::unique_ptr<TameProblem> linear_with_constants() {
    auto p = problem_linear_transport(0.5);
    ensure_constants(*p, kHk);
    return p;
}

}  // namespace

TEST_CASE("weights: structure of the beta sequence") {
    auto p = linear_with_constants();
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    WeightSequence w = build_weights(y, *p, kHk, 1.0);

    const int kc = p->k0() + p->d2();  // = 0
    CHECK(w.beta[kc] == 1.0);
    for (int k = 0; k < kc; ++k) CHECK(w.beta[k] == 0.0);
    for (int k = kc + 1; k <= 12; ++k) {
        CHECK(w.beta[k] > 0.0);
        double denom = std::max(norm(y, k, kHk),
                                p->constants().m_at(k) * p->constants().m_prime_at(k + 1));
        CHECK(w.beta[k] ==
              doctest::Approx(w.h * std::pow(double(k), -k) / denom).epsilon(1e-12));
    }
    // h is dyadic.
    CHECK(std::exp2(std::round(std::log2(w.h))) == doctest::Approx(w.h));
    // alpha_k = beta_{k+d2} / m'_k with d2 = 0 and m' = 1.
    CHECK(w.alpha[0] == doctest::Approx(w.beta[0]));
}

TEST_CASE("weights: radius condition holds with positive margin") {
    auto p = linear_with_constants();
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    WeightSequence w = build_weights(y, *p, kHk, 1.0);
    CHECK(w.radius_margin > 0.0);
    CHECK(radius_condition_margin(w, y, kHk) > 0.0);
    CHECK(radius_condition_margin(w, y, kHk) == doctest::Approx(w.radius_margin).epsilon(1e-10));
}

TEST_CASE("weights: target outside the ball is rejected") {
    auto p = linear_with_constants();
    GradedElement y = 5.0 * mode_element(1, 128, 1, 0.0, 1.0);  // ||y||_0 ~ 8.9 > R' = 1
    CHECK_THROWS_AS(build_weights(y, *p, kHk, 1.0), RadiusExceededError);
    CHECK_THROWS_AS(build_weights(y, *p, kHk, -1.0), std::invalid_argument);
    // The unchecked variant substitutes target-scaled slack instead.
    WeightSequence w = build_weights_unchecked(y, *p, kHk, 1.0);
    CHECK(w.beta[0] == 1.0);
    CHECK(w.h > 0.0);
}

TEST_CASE("summability certificate for n = 1, 2, 3") {
    auto p = linear_with_constants();
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    WeightSequence w = build_weights(y, *p, kHk, 1.0);
    for (int n : {1, 2, 3}) {
        auto rep = check_summability(w, *p, n);
        CHECK(rep.finite);
        CHECK(rep.partial_sums.size() == 13);
        for (size_t i = 1; i < rep.partial_sums.size(); ++i)
            CHECK(rep.partial_sums[i] >= rep.partial_sums[i - 1]);
    }
    CHECK_THROWS_AS(check_summability(w, *p, 0), std::invalid_argument);
}

TEST_CASE("merit at the origin is the weighted target mass") {
    auto p = linear_with_constants();
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    WeightSequence w = build_weights(y, *p, kHk, 1.0);
    CHECK(merit(*p, w, kHk, p->zero(), y) == doctest::Approx(w.f0).epsilon(1e-12));
    // Merit of the exact solution vanishes.
    GradedElement x = p->apply_L(p->zero(), y);
    CHECK(merit(*p, w, kHk, x, y) < 1e-10);
}

TEST_CASE("ekeland ratio below one by construction") {
    auto p = linear_with_constants();
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    WeightSequence w = build_weights(y, *p, kHk, 1.0);
    double A = ekeland_ratio(w, w.f0, w.R_prime);
    CHECK(A > 0.0);
    CHECK(A < 1.0);
    CHECK_THROWS_AS(ekeland_ratio(w, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("weights scale correctly on the nonlinear problem") {
    auto p = problem_nonlinear_transport();
    ensure_constants(*p, kHk);
    GradedElement y = 0.02 * mode_element(1, 128, 1, 0.0, 1.0);
    WeightSequence w = build_weights(y, *p, kHk, 0.45);
    const int kc = 2;  // k0 = 1, d2 = 1
    CHECK(w.beta[kc] == 1.0);
    CHECK(w.beta[0] == 0.0);
    CHECK(w.beta[1] == 0.0);
    CHECK(ekeland_ratio(w, w.f0, w.R_prime) < 1.0);
    // alpha_{k0} = beta_{k0+d2} / m'_{k0}.
    CHECK(w.alpha[1] == doctest::Approx(1.0 / p->constants().m_prime_at(1)).epsilon(1e-12));
}
