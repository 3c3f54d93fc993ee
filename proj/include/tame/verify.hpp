#pragma once

#include <string>
#include <vector>

#include "tame/solver.hpp"

namespace tame {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - observed
    std::string context;
};

/// Norming functional for ||.||_k: a unit dual element y* with
/// <y*, v> = ||v||_k. Hilbert flavor stores the density v/||v||_k paired via
/// the H^k inner product; sup flavor a signed point evaluation of the p-th
/// derivative at the grid argmax (ties broken by lowest derivative order,
/// then lowest grid index).
struct SubdifferentialElement {
    NormFlavor flavor = NormFlavor::SobolevHk;
    int k = 0;
    GradedElement density;  // Hilbert flavor only
    int comp = 0;           // sup flavor: component, derivative order, node
    int deriv_order = 0;
    int grid_index = 0;
    double sign = 1.0;
};

SubdifferentialElement subdifferential_element(const GradedElement& v, int k,
                                               const NormFamily& family);

/// <y*, w> for either flavor.
double dual_pairing(const SubdifferentialElement& ystar, const GradedElement& w,
                    const NormFamily& family);

/// Dual norm of y*; equals 1 up to 1e-10 for elements built above.
double dual_norm(const SubdifferentialElement& ystar, const NormFamily& family);

struct DirectionalDerivativeReport {
    CheckResult result;
    double predicted = 0.0;          // <y*, DF(x) xi> at y* for F(x)
    std::vector<double> h;
    std::vector<double> fd;          // one-sided differences of ||F(x+h xi)||_k
    std::vector<double> rel_error;
    double order = 0.0;              // least-squares slope of log err vs log h
};

/// Right-derivative of t -> ||F(x + t xi)||_k at t = 0 against its
/// subdifferential prediction. Passes when the relative error at the
/// smallest h is below 5*h.
DirectionalDerivativeReport check_directional_derivative(const TameProblem& p,
                                                         const GradedElement& x,
                                                         const GradedElement& xi, int k,
                                                         const NormFamily& family,
                                                         const std::vector<double>& h_list);

/// Samples random band-limited targets with ||y||_{k0+d2} uniform in
/// (0, 0.9 R/m'_{k0}) and requires each solve to succeed with
/// ||x||_{k0} <= mu ||y||_{k0+d2}. One result per sample; failures are
/// recorded, never thrown.
std::vector<CheckResult> check_local_surjection(const TameProblem& p, const NormFamily& family,
                                                double mu, int samples, unsigned seed,
                                                double radius_fraction = 0.9);

/// Solves y0, continues to y1, and checks the Lipschitz witness
/// ||x0 - x1||_{k0} <= mu ||y0 - y1||_{k0+d2}. One-sided: a witness bounds
/// the infimum over the preimage from above.
CheckResult check_lipschitz_inverse(const TameProblem& p, const NormFamily& family,
                                    const GradedElement& y0, const GradedElement& y1, double mu);

}  // namespace tame
