#include "tame/verify.hpp"

#include <cmath>
#include <sstream>

namespace tame {

SubdifferentialElement subdifferential_element(const GradedElement& v, int k,
                                               const NormFamily& family) {
    double nv = norm(v, k, family);
    if (nv == 0.0) throw std::invalid_argument("subdifferential_element: zero input");

    SubdifferentialElement y;
    y.flavor = family.flavor;
    y.k = k;
    if (family.flavor == NormFlavor::SobolevHk) {
        y.density = (1.0 / nv) * v;
        return y;
    }
    // Sup flavor: argmax of |d^p v| over p <= k, component, grid node. Loop
    // order implements the tie-break (lowest order, then component, then node).
    double best = -1.0;
    for (int p = 0; p <= k; ++p) {
        GradedElement dv = v.derivative(p);
        for (int c = 0; c < v.dim(); ++c) {
            for (int j = 0; j < v.n_grid(); ++j) {
                double val = dv.sample(c, j);
                if (std::abs(val) > best) {
                    best = std::abs(val);
                    y.comp = c;
                    y.deriv_order = p;
                    y.grid_index = j;
                    y.sign = val >= 0.0 ? 1.0 : -1.0;
                }
            }
        }
    }
    return y;
}

double dual_pairing(const SubdifferentialElement& ystar, const GradedElement& w,
                    const NormFamily& family) {
    if (ystar.flavor == NormFlavor::SobolevHk) {
        (void)family;
        return hk_inner(ystar.density, w, ystar.k);
    }
    GradedElement dw = w.derivative(ystar.deriv_order);
    return ystar.sign * dw.sample(ystar.comp, ystar.grid_index);
}

double dual_norm(const SubdifferentialElement& ystar, const NormFamily& family) {
    if (ystar.flavor == NormFlavor::SobolevHk)
        return norm(ystar.density, ystar.k, family);
    return 1.0;  // unit signed point evaluation
}

DirectionalDerivativeReport check_directional_derivative(const TameProblem& p,
                                                         const GradedElement& x,
                                                         const GradedElement& xi, int k,
                                                         const NormFamily& family,
                                                         const std::vector<double>& h_list) {
    if (h_list.empty())
        throw std::invalid_argument("check_directional_derivative: empty h list");

    GradedElement fx = p.eval_F(x);
    double f0 = norm(fx, k, family);
    if (f0 == 0.0)
        throw std::invalid_argument("check_directional_derivative: F(x) = 0");

    DirectionalDerivativeReport rep;
    SubdifferentialElement ystar = subdifferential_element(fx, k, family);
    rep.predicted = dual_pairing(ystar, p.apply_DF(x, xi), family);

    double h_min = h_list.front();
    double err_min = 0.0;
    const double scale = std::max(std::abs(rep.predicted), 1e-300);
    for (double h : h_list) {
        double fh = norm(p.eval_F(x + h * xi), k, family);
        double fd = (fh - f0) / h;
        double rel = std::abs(fd - rep.predicted) / scale;
        rep.h.push_back(h);
        rep.fd.push_back(fd);
        rep.rel_error.push_back(rel);
        if (h <= h_min) {
            h_min = h;
            err_min = rel;
        }
    }

    // Convergence order: least-squares slope of log err against log h.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < rep.h.size(); ++i) {
        if (rep.rel_error[i] <= 0.0) continue;
        double lx = std::log(rep.h[i]), ly = std::log(rep.rel_error[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n >= 2) rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);

    rep.result.name = "directional_derivative";
    rep.result.observed = err_min;
    rep.result.bound = 5.0 * h_min;
    rep.result.margin = rep.result.bound - rep.result.observed;
    rep.result.passed = err_min <= 5.0 * h_min;
    std::ostringstream ctx;
    ctx << "k=" << k << " predicted=" << rep.predicted << " order=" << rep.order;
    rep.result.context = ctx.str();
    return rep;
}

std::vector<CheckResult> check_local_surjection(const TameProblem& p, const NormFamily& family,
                                                double mu, int samples, unsigned seed,
                                                double radius_fraction) {
    const int kc = p.k0() + p.d2();
    const double mp = p.constants().m_prime_at(p.k0());
    const double radius = radius_fraction * effective_radius(p) / mp;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<CheckResult> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        GradedElement y = random_bandlimited(rng, p.dim(), p.n_grid(), p.n_grid() / 4);
        double target = radius * std::max(unif(rng), 1e-6);
        y = scaled_to_norm(y, kc, family, target);

        SolveOptions opts;
        opts.mu = mu;
        SolveReport rep = solve_to_target(p, y, family, opts);

        CheckResult res;
        res.name = "surjection[" + std::to_string(i) + "]";
        res.observed = norm(rep.final_x, p.k0(), family);
        res.bound = mu * norm(y, kc, family);
        res.margin = res.bound - res.observed;
        res.passed = rep.solved() && res.observed <= res.bound + 1e-10;
        std::ostringstream ctx;
        ctx << "status=" << to_string(rep.status) << " ||y||_" << kc << "=" << target
            << " m'_k0=" << mp;
        res.context = ctx.str();
        out.push_back(std::move(res));
    }
    return out;
}

CheckResult check_lipschitz_inverse(const TameProblem& p, const NormFamily& family,
                                    const GradedElement& y0, const GradedElement& y1, double mu) {
    const int kc = p.k0() + p.d2();
    CheckResult res;
    res.name = "lipschitz_inverse";
    res.bound = mu * norm(y0 - y1, kc, family);

    SolveOptions opts;
    opts.mu = mu;
    SolveReport r0 = solve_to_target(p, y0, family, opts);
    if (!r0.solved()) {
        res.context = "base solve failed: " + to_string(r0.status);
        return res;
    }
    SolveReport r1 = continuation_solve(p, y0, y1, r0.final_x, family, opts);
    if (!r1.solved()) {
        res.context = "continuation failed: " + to_string(r1.status);
        return res;
    }
    res.observed = norm(r0.final_x - r1.final_x, p.k0(), family);
    res.margin = res.bound - res.observed;
    res.passed = res.observed <= res.bound + 1e-10;
    std::ostringstream ctx;
    ctx << "segments=" << r1.segments << " mu=" << mu;
    res.context = ctx.str();
    return res;
}

}  // namespace tame
