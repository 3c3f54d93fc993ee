#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tame/norms.hpp"

namespace tame {

/// Sharp spectral cutoff: keep modes |m| <= n, zero the rest. Linear and
/// exactly idempotent; n >= n_grid/2 returns the element unchanged.
GradedElement smooth(const GradedElement& x, int n);

struct SmoothingFamily {
    enum class Kind { SharpCutoff };
    Kind kind = Kind::SharpCutoff;
    double c1_est = 1.0;
    double c2_est = 1.0;
    double c3_est = 1.0;
};

struct SmoothingAxiomRow {
    int axiom;  // 1, 2 or 3
    int k;
    int d;
    int n;
    double ratio;
};

struct SmoothingVerification {
    double c1_est = 0.0;
    double c2_est = 0.0;
    bool pass = false;
    std::vector<SmoothingAxiomRow> rows;
    std::vector<std::string> warnings;
};

/// Estimates the smoothing-axiom constants on a probe set. c1_est bounds
/// ||S_n x||_{k+d} / (n^d ||x||_k), c2_est bounds the remainder ratio
/// ||(I-S_n)x||_k / (n^-d ||x||_{k+d}). pass requires both maxima stable
/// within a factor 2 across n_range and the axiom-(1) residual to decrease
/// monotonically (tolerance 1e-10), reaching 0 at full band when included.
/// For the SupCk flavor the constants are empirical estimates only; sharp
/// cutoffs have no uniform sup-norm bound.
SmoothingVerification verify_smoothing_axioms(const NormFamily& family,
                                              const std::vector<GradedElement>& probes,
                                              std::pair<int, int> k_range,
                                              std::pair<int, int> d_range,
                                              const std::vector<int>& n_range);

struct StandardSequence {
    std::vector<int> cutoffs;
    std::vector<GradedElement> v_n;
    double c3_est = 0.0;
    bool controlled_ok = false;  // each v_n controlled-feasible when ||v||_0 <= 1
};

/// v_n = smooth(v, n) on the geometric schedule n in {1, 2, 4, ..., n_grid/2}.
StandardSequence standard_sequence(const GradedElement& v, const NormFamily& family);

}  // namespace tame
