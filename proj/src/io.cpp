#include "tame/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tame {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json element_to_json(const GradedElement& x) {
    return {{"dim", x.dim()}, {"n_grid", x.n_grid()}, {"samples", x.samples()}};
}

GradedElement element_from_json(const nlohmann::json& j) {
    int dim = j.at("dim").get<int>();
    int n_grid = j.at("n_grid").get<int>();
    auto samples = j.at("samples").get<std::vector<double>>();
    if (static_cast<int>(samples.size()) != dim * n_grid)
        throw std::invalid_argument("element_from_json: samples size mismatch");
    return GradedElement::from_samples(dim, n_grid, std::move(samples));
}

nlohmann::json report_to_json(const SolveReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.bound_checks)
        checks.push_back({{"name", c.name},
                          {"observed", c.observed},
                          {"bound", c.bound},
                          {"passed", c.passed}});
    return {{"status", to_string(rep.status)},
            {"message", rep.message},
            {"segments", rep.segments},
            {"iterations", rep.iterates.empty() ? 0 : rep.iterates.back().iter},
            {"bound_checks", checks},
            {"final_x", rep.final_x.empty() ? nlohmann::json() : element_to_json(rep.final_x)}};
}

void write_iterates_csv(std::ostream& os, const SolveReport& rep) {
    os << "iter,merit,residual_k0d2,step,x_norm_k0\n";
    for (const auto& it : rep.iterates)
        os << it.iter << ',' << format_double(it.merit) << ',' << format_double(it.residual)
           << ',' << format_double(it.step) << ',' << format_double(it.x_norm_k0) << '\n';
}

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks, unsigned seed) {
    os << "check,seed,observed,bound,margin,passed\n";
    for (const auto& c : checks)
        os << c.name << ',' << seed << ',' << format_double(c.observed) << ','
           << format_double(c.bound) << ',' << format_double(c.margin) << ','
           << (c.passed ? 1 : 0) << '\n';
}

nlohmann::json checks_summary_json(const std::vector<CheckResult>& checks) {
    int passed = 0;
    for (const auto& c : checks) passed += c.passed ? 1 : 0;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& c : checks)
        if (!c.passed)
            failures.push_back({{"name", c.name},
                                {"observed", c.observed},
                                {"bound", c.bound},
                                {"context", c.context}});
    return {{"total", checks.size()},
            {"passed", passed},
            {"pass_rate", checks.empty() ? 1.0 : double(passed) / checks.size()},
            {"failures", failures}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace tame
