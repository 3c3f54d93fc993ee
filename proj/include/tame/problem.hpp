#pragma once

#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tame/norms.hpp"

namespace tame {

/// Thrown when a linearization is (numerically) singular, i.e. the point left
/// the invertibility ball of the problem.
class OutsideBallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tame constants m_k (derivative bound) and m'_k (right-inverse bound),
/// non-decreasing and positive. Indices past the stored range are padded
/// with the last value.
struct TameConstants {
    std::vector<double> m;
    std::vector<double> m_prime;

    bool ready() const { return !m.empty() && !m_prime.empty(); }
    double m_at(int k) const;
    double m_prime_at(int k) const;
};

/// A map F with Gateaux derivative DF(x), right inverse L(x) and tame
/// metadata: derivative losses d1 (for DF) and d2 (for L), base index k0 and
/// ball radius R (may be +inf). DF(x) L(x) = I holds on the discrete space.
class TameProblem {
public:
    virtual ~TameProblem() = default;

    virtual std::string name() const = 0;
    virtual GradedElement eval_F(const GradedElement& x) const = 0;
    virtual GradedElement apply_DF(const GradedElement& x, const GradedElement& u) const = 0;
    virtual GradedElement apply_L(const GradedElement& x, const GradedElement& v) const = 0;

    int dim() const { return dim_; }
    int n_grid() const { return n_grid_; }
    int d1() const { return d1_; }
    int d2() const { return d2_; }
    int k0() const { return k0_; }
    double R() const { return R_; }

    const TameConstants& constants() const { return constants_; }
    void set_constants(TameConstants c) { constants_ = std::move(c); }
    void set_k0(int k0) { k0_ = k0; }

    GradedElement zero() const { return GradedElement(dim_, n_grid_); }

protected:
    TameProblem(int dim, int n_grid, int d1, int d2, int k0, double R)
        : dim_(dim), n_grid_(n_grid), d1_(d1), d2_(d2), k0_(k0), R_(R) {}

private:
    int dim_, n_grid_, d1_, d2_, k0_;
    double R_;
    TameConstants constants_;
};

/// F(x) = x + alpha x'. Exact spectral-multiplier right inverse; d1 = 1,
/// d2 = 0, R = +inf. Analytic constants m_k = 1+|alpha|, m'_k = 1.
std::unique_ptr<TameProblem> problem_linear_transport(double alpha, int n_grid = 128);

/// F(x) = x + x x' with dealiased products. L(x) by dense collocation solve
/// of the assembled DF(x); d1 = 1, d2 = 1, k0 = 1, R = 0.5 (invertibility
/// sweep keeps 1 + x' away from zero on that ball). Constants are estimated.
std::unique_ptr<TameProblem> problem_nonlinear_transport(int n_grid = 128);

/// G(z) = F(z + center) - F(center), the recentering used by segment
/// chaining. Shares the base problem's derivative and right inverse.
class RecenteredProblem final : public TameProblem {
public:
    RecenteredProblem(const TameProblem& base, GradedElement center, double ball_radius);

    std::string name() const override { return "recentered(" + base_.name() + ")"; }
    GradedElement eval_F(const GradedElement& z) const override;
    GradedElement apply_DF(const GradedElement& z, const GradedElement& u) const override;
    GradedElement apply_L(const GradedElement& z, const GradedElement& v) const override;

private:
    const TameProblem& base_;
    GradedElement center_;
    GradedElement f_center_;
};

/// Dense collocation right inverse: assembles the matrix of DF(x) by
/// applying it to the grid basis and solves. Throws OutsideBallError when the
/// condition number exceeds cond_limit.
GradedElement collocation_right_inverse(const TameProblem& p, const GradedElement& x,
                                        const GradedElement& v, double cond_limit = 1e12);

struct TameEstimates {
    std::vector<double> m;
    std::vector<double> m_prime;
    std::vector<double> c1_table;  // one c1(u) per probe
};

/// Randomized probing of the tame constants. m_k comes from the x = 0 slice
/// of Condition 3, m'_k from Condition 5 ratios over the ball. Both sequences
/// are made non-decreasing by a running maximum. Deterministic under seed.
TameEstimates estimate_tame_constants(const TameProblem& p, const NormFamily& family,
                                      int probe_count, unsigned seed);

/// Installs estimated constants on the problem if not already present.
void ensure_constants(TameProblem& p, const NormFamily& family, unsigned seed = 1234);

/// Converts a constant of the (q24) form into a Condition-3 constant:
/// c1 = c1' (1 + 1/(m0 ||u||_0)).
double check_condition3_equivalence(double c1_prime, double m0, double u_norm0);

/// Central finite difference (F(x+hu) - F(x-hu)) / (2h).
GradedElement gateaux_fd(const TameProblem& p, const GradedElement& x, const GradedElement& u,
                         double h);

/// Random real element with modes |m| <= max_mode, coefficients decaying
/// geometrically (ratio `decay`).
GradedElement random_bandlimited(std::mt19937_64& rng, int dim, int n_grid, int max_mode,
                                 double decay = 0.7);

/// Rescales x so that ||x||_k == target (x must be nonzero).
GradedElement scaled_to_norm(const GradedElement& x, int k, const NormFamily& family,
                             double target);

/// R when finite, otherwise a fixed desk-scale stand-in used for sampling.
double effective_radius(const TameProblem& p);

}  // namespace tame
