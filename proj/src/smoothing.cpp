#include "tame/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tame {

GradedElement smooth(const GradedElement& x, int n) {
    if (n < 1) throw std::invalid_argument("smooth: cutoff must be >= 1");
    if (n >= x.n_grid() / 2) return x;
    std::vector<GradedElement::Complex> coeffs = x.coeffs();
    const int ng = x.n_grid();
    for (int c = 0; c < x.dim(); ++c) {
        const size_t base = static_cast<size_t>(c) * ng;
        for (int j = 0; j < ng; ++j) {
            if (std::abs(GradedElement::mode_of_bin(j, ng)) > n) coeffs[base + j] = 0.0;
        }
    }
    return GradedElement::from_modes(x.dim(), ng, std::move(coeffs));
}

SmoothingVerification verify_smoothing_axioms(const NormFamily& family,
                                              const std::vector<GradedElement>& probes,
                                              std::pair<int, int> k_range,
                                              std::pair<int, int> d_range,
                                              const std::vector<int>& n_range) {
    if (probes.empty()) throw std::invalid_argument("verify_smoothing_axioms: empty probe set");
    if (k_range.first < 0 || k_range.second + d_range.second > family.k_max ||
        d_range.first < 0)
        throw std::invalid_argument("verify_smoothing_axioms: ranges exceed k_max");

    SmoothingVerification out;
    std::vector<int> ns = n_range;
    std::sort(ns.begin(), ns.end());

    std::vector<double> per_n_c1(ns.size(), 0.0), per_n_c2(ns.size(), 0.0);
    bool axiom1_ok = true;

    int probe_id = 0;
    for (const auto& probe : probes) {
        ++probe_id;
        if (probe.max_abs_sample() == 0.0) {
            out.warnings.push_back("probe " + std::to_string(probe_id) + " is zero, skipped");
            continue;
        }
        for (int k = k_range.first; k <= k_range.second; ++k) {
            const double xk = norm(probe, k, family);
            // Axiom (1): residual decreases monotonically to 0 at full band.
            double prev = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < ns.size(); ++i) {
                GradedElement res = smooth(probe, ns[i]) - probe;
                double r = norm(res, k, family);
                out.rows.push_back({1, k, 0, ns[i], r});
                if (r > prev + 1e-10) axiom1_ok = false;
                prev = r;
                if (ns[i] >= probe.n_grid() / 2 && r != 0.0) axiom1_ok = false;
            }
            for (int d = d_range.first; d <= d_range.second; ++d) {
                const double xkd = norm(probe, k + d, family);
                for (size_t i = 0; i < ns.size(); ++i) {
                    const int n = ns[i];
                    // At and beyond the full band the cutoff is the identity
                    // and both axiom ratios are uninformative.
                    if (n >= probe.n_grid() / 2) continue;
                    GradedElement sx = smooth(probe, n);
                    if (xk > 0.0) {
                        double r2 = norm(sx, k + d, family) / (std::pow(n, d) * xk);
                        out.rows.push_back({2, k, d, n, r2});
                        out.c1_est = std::max(out.c1_est, r2);
                        per_n_c1[i] = std::max(per_n_c1[i], r2);
                    }
                    if (xkd > 0.0) {
                        double r3 = norm(probe - sx, k, family) / (std::pow(n, -d) * xkd);
                        out.rows.push_back({3, k, d, n, r3});
                        out.c2_est = std::max(out.c2_est, r3);
                        per_n_c2[i] = std::max(per_n_c2[i], r3);
                    }
                }
            }
        }
    }

    // Stability compares only the cutoffs the probe set actually exercises;
    // zero maxima (probe band entirely inside the cutoff) are vacuous.
    auto stable = [](const std::vector<double>& v) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double x : v) {
            if (x <= 0.0) continue;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return hi <= 0.0 || hi / lo <= 2.0;
    };
    out.pass = axiom1_ok && stable(per_n_c1) && stable(per_n_c2);
    if (family.flavor == NormFlavor::SupCk)
        out.warnings.push_back(
            "SupCk constants are empirical estimates; sharp-cutoff sup-norm bounds may degrade "
            "logarithmically");
    return out;
}

StandardSequence standard_sequence(const GradedElement& v, const NormFamily& family) {
    if (v.max_abs_sample() == 0.0)
        throw std::invalid_argument("standard_sequence: v must be nonzero");
    StandardSequence out;
    for (int n = 1; n <= v.n_grid() / 2; n *= 2) {
        out.cutoffs.push_back(n);
        out.v_n.push_back(smooth(v, n));
    }
    out.c3_est = 0.0;
    const bool v_small = norm(v, 0, family) <= 1.0;
    out.controlled_ok = true;
    for (const auto& vn : out.v_n) {
        for (int k = 0; k <= family.k_max; ++k) {
            double denom = norm(v, k, family);
            if (denom > 0.0) out.c3_est = std::max(out.c3_est, norm(vn, k, family) / denom);
        }
        if (v_small && !controlled_constant(vn, family).feasible) out.controlled_ok = false;
    }
    return out;
}

}  // namespace tame
