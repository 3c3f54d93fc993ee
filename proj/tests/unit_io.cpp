#include <doctest.h>

#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tame/io.hpp"

using namespace tame;

namespace {

const NormFamily kHk{NormFlavor::SobolevHk, 12};

}  // namespace

TEST_CASE("format_double is shortest-round-trip stable") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("element JSON round trip is exact") {
    std::mt19937_64 rng(3);
    GradedElement x = random_bandlimited(rng, 1, 128, 30);
    GradedElement y = element_from_json(element_to_json(x));
    CHECK(x.samples() == y.samples());

    nlohmann::json bad = {{"dim", 1}, {"n_grid", 128}, {"samples", std::vector<double>(3)}};
    CHECK_THROWS_AS(element_from_json(bad), std::invalid_argument);
}

TEST_CASE("iterate CSV has the documented columns and is reproducible") {
    auto p = problem_linear_transport(0.5);
    ensure_constants(*p, kHk);
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    SolveReport rep = solve_to_target(*p, y, kHk, SolveOptions{});
    REQUIRE(rep.solved());

    std::ostringstream a, b;
    write_iterates_csv(a, rep);
    write_iterates_csv(b, rep);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("iter,merit,residual_k0d2,step,x_norm_k0\n", 0) == 0);
}

TEST_CASE("report JSON carries status and bound checks") {
    auto p = problem_linear_transport(0.5);
    ensure_constants(*p, kHk);
    GradedElement y = 0.3 * mode_element(1, 128, 1, 0.0, 1.0);
    SolveReport rep = solve_to_target(*p, y, kHk, SolveOptions{});
    nlohmann::json j = report_to_json(rep);
    CHECK(j["status"] == "Solved");
    CHECK(j["bound_checks"].size() == rep.bound_checks.size());
    GradedElement back = element_from_json(j["final_x"]);
    CHECK((back - rep.final_x).max_abs_sample() == 0.0);
}

TEST_CASE("checks CSV and summary reflect pass counts") {
    std::vector<CheckResult> checks = {{"a", true, 1.0, 2.0, 1.0, ""},
                                       {"b", false, 3.0, 2.0, -1.0, "ctx"}};
    std::ostringstream os;
    write_checks_csv(os, checks, 7);
    CHECK(os.str() ==
          "check,seed,observed,bound,margin,passed\n"
          "a,7,1,2,1,1\n"
          "b,7,3,2,-1,0\n");
    nlohmann::json s = checks_summary_json(checks);
    CHECK(s["total"] == 2);
    CHECK(s["passed"] == 1);
    CHECK(s["failures"].size() == 1);
}
