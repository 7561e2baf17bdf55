#pragma once

#include <string>
#include <vector>

#include "gardner/expr.hpp"

namespace gardner {

enum class Status { Pass, Fail, NumericPass };

const char* status_name(Status s);
const char* mode_name(CheckMode m);

struct ReportEntry {
  std::string name;
  Status status = Status::Pass;
  CheckMode mode = CheckMode::Symbolic;
  std::string residual;
  std::string anchor;
  double seconds = 0.0;
  std::string detail;
};

class Report {
 public:
  void add(ReportEntry e) { entries_.push_back(std::move(e)); }
  void merge(const Report& other);
  const std::vector<ReportEntry>& entries() const { return entries_; }
  bool ok() const;
  std::size_t failures() const;

  // human-readable table; timings omitted when `timings` is false
  std::string text(bool timings = true) const;
  std::string json(bool timings = true) const;

 private:
  std::vector<ReportEntry> entries_;
};

// Runs the zero test on `residual` and records the outcome. A failing entry
// carries the rendered residual (truncated).
ReportEntry check_zero(const std::string& name, const std::string& anchor, const Expr& residual,
                       const ZeroTester& tester);
ReportEntry check_bool(const std::string& name, const std::string& anchor, bool ok, const std::string& detail = "");

std::string truncate_rendering(const std::string& s, std::size_t max = 240);

}  // namespace gardner
