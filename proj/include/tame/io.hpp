#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tame/solver.hpp"
#include "tame/verify.hpp"

namespace tame {

/// Shortest round-trip decimal representation (printf %.17g); all CSV and
/// JSON numbers go through this so outputs are byte-stable across runs.
std::string format_double(double v);

nlohmann::json element_to_json(const GradedElement& x);
GradedElement element_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SolveReport& rep);

/// Columns: iter, merit, residual_k0d2, step, x_norm_k0.
void write_iterates_csv(std::ostream& os, const SolveReport& rep);

/// Columns: check, seed, observed, bound, margin, passed.
void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks, unsigned seed);

nlohmann::json checks_summary_json(const std::vector<CheckResult>& checks);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace tame
