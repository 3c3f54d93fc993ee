#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tame/weights.hpp"

namespace tame {

enum class SolveStatus {
    Solved,
    OutsideBall,
    MaxIters,
    SingularInverse,
    Diverged,
    RadiusExceeded,
    RateViolation,
    EpsilonTooLarge,
};

std::string to_string(SolveStatus s);

struct SolveOptions {
    double mu = 0.0;              // 0 = auto: 1.1 * m'_{k0}
    double R_prime_factor = 0.9;  // R' = factor * R
    double tol = 1e-11;           // stopping residual in ||.||_{k0+d2}
    int max_iters = 200;
    double step_shrink = 0.5;
    double armijo_c = 0.1;
    unsigned seed = 1;
    // Benchmark mode: run the iteration dynamics without the existence
    // certificate (radius condition) and without ball rejection, so both
    // solvers in a sweep face the same ground rules.
    bool enforce_ball = true;
    bool require_certificate = true;
};

struct IterateRecord {
    int iter = 0;
    double merit = 0.0;
    std::vector<double> residual_norms;  // per-k residual norms
    double residual = 0.0;               // ||F(x)-y||_{k0+d2}
    double step = 0.0;
    double x_norm_k0 = 0.0;
};

struct BoundCheck {
    std::string name;
    double observed = 0.0;
    double bound = 0.0;
    bool passed = false;
};

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIters;
    std::vector<IterateRecord> iterates;
    std::vector<BoundCheck> bound_checks;
    GradedElement final_x;
    int segments = 0;
    std::string message;

    bool solved() const { return status == SolveStatus::Solved; }
};

/// Descent along u = -L(x)(F(x)-y) with Armijo backtracking on the weighted
/// merit, started at x = 0. The merit sequence of accepted steps is strictly
/// decreasing. On success records the solution bound ||x||_{k0} <= mu
/// ||y||_{k0+d2} and the ball bound ||x||_{k0} < R.
SolveReport descent_solve(const TameProblem& p, const GradedElement& y, const WeightSequence& w,
                          const NormFamily& family, const SolveOptions& opts);

/// Full-step iteration x <- x - L(x)(F(x)-y), no merit control. Diverged
/// after five consecutive residual increases.
SolveReport newton_solve(const TameProblem& p, const GradedElement& y, const NormFamily& family,
                         const SolveOptions& opts);

/// Splits the segment from y_start to y_end into parts shorter than
/// 0.9 (R-R')/m'_{k0} and solves each by descent recentered at the previous
/// solution. Requires F(x_start) ~ y_start.
SolveReport continuation_solve(const TameProblem& p, const GradedElement& y_start,
                               const GradedElement& y_end, const GradedElement& x_start,
                               const NormFamily& family, const SolveOptions& opts);

/// Solves F(x) = y for a target of finite regularity k0+d2 by chaining
/// through smoothed approximants y_n chosen so that ||y_n - y||_{k0+d2}
/// halves per level, and checks the Cauchy rate ||x_n - x_{n+1}||_{k0} <=
/// mu ||y_n - y_{n+1}||_{k0+d2} (RateViolation past factor 2).
SolveReport finite_regularity_solve(const TameProblem& p, const GradedElement& y_rough,
                                    const NormFamily& family, const SolveOptions& opts);

/// F(eps, x) = F0(x) + eps F1(x) with F0(0) = 0 and F1(0) != 0. DF1 may be
/// null for families where F1 is a constant map; otherwise the combined
/// derivative is inverted by collocation.
struct ImplicitFamily {
    std::shared_ptr<TameProblem> F0;
    std::function<GradedElement(const GradedElement&)> F1;
    std::function<GradedElement(const GradedElement&, const GradedElement&)> DF1;  // optional
    double epsilon0 = 1.0;
};

/// Solves F0(x) + eps(F1(x) - F1(0)) = -eps F1(0) by descent and asserts
/// ||x_eps||_{k0} <= mu |eps| ||F1(0)||_{k0+d2}.
SolveReport implicit_solve(const ImplicitFamily& fam, double epsilon, const NormFamily& family,
                           const SolveOptions& opts);

/// Weight construction plus descent, picking R' from the options (for
/// problems with R = +inf a finite R' is derived from the target norm).
SolveReport solve_to_target(const TameProblem& p, const GradedElement& y,
                            const NormFamily& family, const SolveOptions& opts);

/// The mu actually used by a solve: opts.mu, or 1.1 * m'_{k0} when zero.
double resolve_mu(const TameProblem& p, const SolveOptions& opts);

}  // namespace tame
