#include <doctest.h>

#include <cmath>
#include <random>

#include "tame/norms.hpp"

using namespace tame;

namespace {

const NormFamily kSup{NormFlavor::SupCk, 12};
const NormFamily kHk{NormFlavor::SobolevHk, 12};

GradedElement random_element(std::mt19937_64& rng, int n_grid = 128) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> s(static_cast<size_t>(n_grid));
    for (double& v : s) v = g(rng);
    return GradedElement::from_samples(1, n_grid, std::move(s));
}

}  // namespace

TEST_CASE("sup norm of a constant is its value at every k") {
    GradedElement c = constant_element(1, 128, 1.0);
    for (int k = 0; k <= 12; ++k) CHECK(norm(c, k, kSup) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sup norm of sin is 1 through k = 3") {
    GradedElement s = mode_element(1, 128, 1, 0.0, 1.0);
    CHECK(norm(s, 3, kSup) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("H^1 norm of sin is sqrt(2 pi)") {
    GradedElement s = mode_element(1, 128, 1, 0.0, 1.0);
    CHECK(norm(s, 0, kHk) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(norm(s, 1, kHk) == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("norm errors: k out of range and non-finite input") {
    GradedElement s = mode_element(1, 128, 1, 0.0, 1.0);
    CHECK_THROWS_AS(norm(s, 13, kHk), std::out_of_range);
    CHECK_THROWS_AS(norm(s, -1, kHk), std::out_of_range);
}

TEST_CASE("norms are monotone in k, homogeneous, and subadditive") {
    std::mt19937_64 rng(23);
    for (const NormFamily& fam : {kSup, kHk}) {
        for (int trial = 0; trial < 8; ++trial) {
            GradedElement x = random_element(rng);
            GradedElement y = random_element(rng);
            for (int k = 0; k < 12; ++k)
                CHECK(norm(x, k, fam) <= norm(x, k + 1, fam));
            for (int k : {0, 3, 7, 12}) {
                double nx = norm(x, k, fam);
                CHECK(norm(2.5 * x, k, fam) == doctest::Approx(2.5 * nx).epsilon(1e-12));
                CHECK(norm(x + y, k, fam) <= nx + norm(y, k, fam) + 1e-10);
            }
        }
    }
}

TEST_CASE("hk_inner is symmetric and induces the norm") {
    std::mt19937_64 rng(31);
    GradedElement a = random_element(rng);
    GradedElement b = random_element(rng);
    for (int k : {0, 2, 5}) {
        CHECK(hk_inner(a, b, k) == doctest::Approx(hk_inner(b, a, k)).epsilon(1e-12));
        CHECK(std::sqrt(hk_inner(a, a, k)) == doctest::Approx(norm(a, k, kHk)).epsilon(1e-12));
    }
}

TEST_CASE("metric distance of an element to itself is zero") {
    GradedElement x = mode_element(1, 128, 4, 1.0, 2.0);
    FrechetMetric m = make_default_metric(12, 1.0);
    CHECK(metric_distance(x, x, m, kHk) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("metric with a single active weight below the clamp") {
    GradedElement x = constant_element(1, 128, 1.0);
    GradedElement zero(1, 128);
    FrechetMetric m;
    m.alpha = {1.0, 0.0};
    m.r = 10.0;
    CHECK(metric_distance(x, zero, m, kSup) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("metric clamps both terms at r") {
    // ||diff||_0 = ||diff||_1 = 1 for a unit constant; both terms clamp to 0.5.
    GradedElement x = constant_element(1, 128, 1.0);
    GradedElement zero(1, 128);
    FrechetMetric m;
    m.alpha = {1.0, 1.0};
    m.r = 0.5;
    CHECK(metric_distance(x, zero, m, kSup) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("metric axioms on random triples") {
    std::mt19937_64 rng(47);
    FrechetMetric m = make_default_metric(12, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        GradedElement x = random_element(rng), y = random_element(rng), z = random_element(rng);
        double dxy = metric_distance(x, y, m, kHk);
        CHECK(dxy == metric_distance(y, x, m, kHk));
        CHECK(dxy <= metric_distance(x, z, m, kHk) + metric_distance(z, y, m, kHk) + 1e-10);
    }
}

TEST_CASE("default metric weights and tail bound") {
    FrechetMetric m = make_default_metric(12, 1.0);
    CHECK(m.alpha[0] == 1.0);
    CHECK(m.alpha[3] == doctest::Approx(std::pow(3.0, -3.0)));
    CHECK(m.tail_bound == doctest::Approx(2.0 * std::pow(13.0, -13.0)));
}

TEST_CASE("controlled constant of a unit constant") {
    auto cc = controlled_constant(constant_element(1, 128, 1.0), kSup);
    CHECK(cc.c0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cc.feasible);
}

TEST_CASE("controlled constant of sin(4w) is 4 and feasible") {
    auto cc = controlled_constant(mode_element(1, 128, 4, 0.0, 1.0), kSup);
    CHECK(cc.c0 == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(cc.feasible);  // ||x||_0 = 1 <= 1
}

TEST_CASE("constant 2 is not controlled-feasible") {
    auto cc = controlled_constant(constant_element(1, 128, 2.0), kSup);
    CHECK_FALSE(cc.feasible);  // ||x||_0 = 2 > c0^0 = 1
}
