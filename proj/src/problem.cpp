#include "tame/problem.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace tame {

double TameConstants::m_at(int k) const {
    if (m.empty()) throw std::logic_error("TameConstants: m not set");
    return k < static_cast<int>(m.size()) ? m[k] : m.back();
}

double TameConstants::m_prime_at(int k) const {
    if (m_prime.empty()) throw std::logic_error("TameConstants: m_prime not set");
    return k < static_cast<int>(m_prime.size()) ? m_prime[k] : m_prime.back();
}

namespace {

class LinearTransport final : public TameProblem {
public:
    LinearTransport(double alpha, int n_grid)
        : TameProblem(1, n_grid, /*d1=*/1, /*d2=*/0, /*k0=*/0,
                      std::numeric_limits<double>::infinity()),
          alpha_(alpha) {
        TameConstants c;
        c.m.assign(1, 1.0 + std::abs(alpha));
        c.m_prime.assign(1, 1.0);
        set_constants(c);
    }

    std::string name() const override { return "linear_transport"; }

    GradedElement eval_F(const GradedElement& x) const override {
        return x + alpha_ * x.derivative(1);
    }

    GradedElement apply_DF(const GradedElement& x, const GradedElement& u) const override {
        (void)x;
        return u + alpha_ * u.derivative(1);
    }

    GradedElement apply_L(const GradedElement& x, const GradedElement& v) const override {
        (void)x;
        // Mode-wise inverse of 1 + i alpha m. The Nyquist bin is treated as
        // mode 0, matching the derivative convention that zeroes it.
        const int n = v.n_grid();
        std::vector<GradedElement::Complex> coeffs = v.coeffs();
        for (int c = 0; c < v.dim(); ++c) {
            const size_t base = static_cast<size_t>(c) * n;
            for (int j = 0; j < n; ++j) {
                double m = (j == n / 2) ? 0.0 : GradedElement::mode_of_bin(j, n);
                coeffs[base + j] /= GradedElement::Complex{1.0, alpha_ * m};
            }
        }
        return GradedElement::from_modes(v.dim(), n, std::move(coeffs));
    }

private:
    double alpha_;
};

class NonlinearTransport final : public TameProblem {
public:
    explicit NonlinearTransport(int n_grid)
        : TameProblem(1, n_grid, /*d1=*/1, /*d2=*/1, /*k0=*/1, /*R=*/0.5) {}

    std::string name() const override { return "nonlinear_transport"; }

    GradedElement eval_F(const GradedElement& x) const override {
        return x + x.pointwise_product(x.derivative(1));
    }

    GradedElement apply_DF(const GradedElement& x, const GradedElement& u) const override {
        GradedElement xp = x.derivative(1);
        return u + xp.pointwise_product(u) + x.pointwise_product(u.derivative(1));
    }

    GradedElement apply_L(const GradedElement& x, const GradedElement& v) const override {
        return collocation_right_inverse(*this, x, v);
    }
};

}  // namespace

std::unique_ptr<TameProblem> problem_linear_transport(double alpha, int n_grid) {
    if (std::abs(alpha) >= 10.0)
        throw std::invalid_argument("problem_linear_transport: |alpha| must be < 10");
    return std::make_unique<LinearTransport>(alpha, n_grid);
}

std::unique_ptr<TameProblem> problem_nonlinear_transport(int n_grid) {
    return std::make_unique<NonlinearTransport>(n_grid);
}

RecenteredProblem::RecenteredProblem(const TameProblem& base, GradedElement center,
                                     double ball_radius)
    : TameProblem(base.dim(), base.n_grid(), base.d1(), base.d2(), base.k0(), ball_radius),
      base_(base),
      center_(std::move(center)),
      f_center_(base.eval_F(center_)) {
    set_constants(base.constants());
}

GradedElement RecenteredProblem::eval_F(const GradedElement& z) const {
    return base_.eval_F(z + center_) - f_center_;
}

GradedElement RecenteredProblem::apply_DF(const GradedElement& z, const GradedElement& u) const {
    return base_.apply_DF(z + center_, u);
}

GradedElement RecenteredProblem::apply_L(const GradedElement& z, const GradedElement& v) const {
    return base_.apply_L(z + center_, v);
}

GradedElement collocation_right_inverse(const TameProblem& p, const GradedElement& x,
                                        const GradedElement& v, double cond_limit) {
    const int n = p.n_grid() * p.dim();
    Eigen::MatrixXd A(n, n);
    std::vector<double> basis(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        basis[j] = 1.0;
        GradedElement e = GradedElement::from_samples(p.dim(), p.n_grid(), basis);
        basis[j] = 0.0;
        GradedElement col = p.apply_DF(x, e);
        for (int i = 0; i < n; ++i) A(i, j) = col.samples()[i];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rcond() < 1.0 / cond_limit)
        throw OutsideBallError("collocation_right_inverse: singular linearization at " +
                               p.name());
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = v.samples()[i];
    Eigen::VectorXd u = lu.solve(b);
    // One step of iterative refinement; high-order norms of the identity
    // residual amplify grid roundoff by ~n_grid^k.
    u += lu.solve(b - A * u);
    std::vector<double> s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) s[i] = u(i);
    return GradedElement::from_samples(p.dim(), p.n_grid(), std::move(s));
}

GradedElement random_bandlimited(std::mt19937_64& rng, int dim, int n_grid, int max_mode,
                                 double decay) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<GradedElement::Complex> coeffs(static_cast<size_t>(dim) * n_grid, {0.0, 0.0});
    for (int c = 0; c < dim; ++c) {
        const size_t base = static_cast<size_t>(c) * n_grid;
        double scale = 1.0;
        for (int m = 0; m <= std::min(max_mode, n_grid / 2 - 1); ++m) {
            GradedElement::Complex z{gauss(rng), m == 0 ? 0.0 : gauss(rng)};
            coeffs[base + GradedElement::bin_of_mode(m, n_grid)] = scale * z;
            scale *= decay;
        }
    }
    return GradedElement::from_modes(dim, n_grid, std::move(coeffs));
}

GradedElement scaled_to_norm(const GradedElement& x, int k, const NormFamily& family,
                             double target) {
    double nx = norm(x, k, family);
    if (nx == 0.0) throw std::invalid_argument("scaled_to_norm: zero element");
    return (target / nx) * x;
}

double effective_radius(const TameProblem& p) {
    return std::isfinite(p.R()) ? p.R() : 8.0;
}

TameEstimates estimate_tame_constants(const TameProblem& p, const NormFamily& family,
                                      int probe_count, unsigned seed) {
    if (probe_count < 16)
        throw std::invalid_argument("estimate_tame_constants: probe_count must be >= 16");
    if (p.R() <= 0.0) throw std::invalid_argument("estimate_tame_constants: empty ball");

    std::mt19937_64 rng(seed);
    const int dim = p.dim(), ng = p.n_grid();
    const int max_mode = ng / 4;

    // Canonical probes pin the low-mode extremes the random draws can miss.
    std::vector<GradedElement> probes = {
        constant_element(dim, ng, 1.0),    mode_element(dim, ng, 1, 0.0, 1.0),
        mode_element(dim, ng, 2, 1.0, 0.0), mode_element(dim, ng, 4, 0.0, 1.0),
        mode_element(dim, ng, 8, 1.0, 0.0),
    };
    while (static_cast<int>(probes.size()) < probe_count)
        probes.push_back(random_bandlimited(rng, dim, ng, max_mode));

    const double r_eff = effective_radius(p);
    std::vector<GradedElement> ball_points = {p.zero()};
    for (double frac : {0.25, 0.5, 0.75, 0.9}) {
        GradedElement x = random_bandlimited(rng, dim, ng, max_mode);
        ball_points.push_back(scaled_to_norm(x, p.k0(), family, frac * 0.9 * r_eff));
    }

    TameEstimates est;
    const int k_top_m = family.k_max - p.d1();
    const int k_top_mp = family.k_max - p.d2();
    est.m.assign(static_cast<size_t>(k_top_m) + 1, 1e-12);
    est.m_prime.assign(static_cast<size_t>(k_top_mp) + 1, 1e-12);

    GradedElement origin = p.zero();
    for (const auto& u : probes) {
        GradedElement dfu = p.apply_DF(origin, u);
        for (int k = 0; k <= k_top_m; ++k) {
            double denom = norm(u, k + p.d1(), family);
            if (denom > 0.0) est.m[k] = std::max(est.m[k], norm(dfu, k, family) / denom);
        }
    }
    for (const auto& x : ball_points) {
        for (const auto& v : probes) {
            GradedElement lv = p.apply_L(x, v);
            for (int k = 0; k <= k_top_mp; ++k) {
                double denom = norm(v, k + p.d2(), family);
                if (denom > 0.0)
                    est.m_prime[k] = std::max(est.m_prime[k], norm(lv, k, family) / denom);
            }
        }
    }
    // Non-decreasing enforcement pass.
    for (size_t k = 1; k < est.m.size(); ++k) est.m[k] = std::max(est.m[k], est.m[k - 1]);
    for (size_t k = 1; k < est.m_prime.size(); ++k)
        est.m_prime[k] = std::max(est.m_prime[k], est.m_prime[k - 1]);

    for (const auto& u : probes) {
        double c1 = 0.0;
        for (const auto& x : ball_points) {
            GradedElement dfu = p.apply_DF(x, u);
            GradedElement fx = p.eval_F(x);
            for (int k = 0; k <= k_top_m; ++k) {
                double denom = est.m[k] * norm(u, k + p.d1(), family) + norm(fx, k, family);
                if (denom > 0.0) c1 = std::max(c1, norm(dfu, k, family) / denom);
            }
        }
        est.c1_table.push_back(c1);
    }
    return est;
}

void ensure_constants(TameProblem& p, const NormFamily& family, unsigned seed) {
    if (p.constants().ready()) return;
    TameEstimates est = estimate_tame_constants(p, family, 24, seed);
    p.set_constants({est.m, est.m_prime});
}

double check_condition3_equivalence(double c1_prime, double m0, double u_norm0) {
    if (u_norm0 <= 0.0) throw std::invalid_argument("check_condition3_equivalence: zero u");
    if (m0 <= 0.0) throw std::invalid_argument("check_condition3_equivalence: m0 must be > 0");
    return c1_prime * (1.0 + 1.0 / (m0 * u_norm0));
}

GradedElement gateaux_fd(const TameProblem& p, const GradedElement& x, const GradedElement& u,
                         double h) {
    if (h <= 0.0) throw std::invalid_argument("gateaux_fd: h must be positive");
    GradedElement diff = p.eval_F(x + h * u) - p.eval_F(x + (-h) * u);
    return (1.0 / (2.0 * h)) * diff;
}

}  // namespace tame
