#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gardner/report.hpp"

namespace gardner {

// One acceptance criterion: a named group of checks with a runtime budget.
struct Criterion {
  int number = 0;
  std::string title;
  double budget_seconds = 0.0;  // 0: no budget
  std::function<Report(std::uint64_t seed)> run;
};

const std::vector<Criterion>& criteria();

struct CriterionOutcome {
  const Criterion* criterion = nullptr;
  Report report;
  double seconds = 0.0;
  bool passed() const;
};

// Runs the checks and appends a runtime entry when a budget is set.
CriterionOutcome run_criterion(const Criterion& c, std::uint64_t seed);

Report adjoint_report();
Report selfadjoint_report(std::uint64_t seed);
Report symmetry_catalog_report(std::uint64_t seed, int draws = 20);
Report multiplier_report();
Report density_flux_report();
Report ibragimov_report();
Report double_reduction_report();
Report property_report(std::uint64_t seed);
Report numerics_report();
Report reduction_consistency_report();

// Literal comparisons against displayed forms that are outside the criteria
// (displayed fluxes of the Q = 0 subcases, 1.1 flux against the corrected density).
Report display_diagnostics_report();

// Every criterion plus the display diagnostics; entry names carry the criterion number.
Report paper_suite(std::uint64_t seed, bool numerics = true);

}  // namespace gardner
