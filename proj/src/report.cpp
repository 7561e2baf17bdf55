#include "gardner/report.hpp"

#include <chrono>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "gardner/parser.hpp"

namespace gardner {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::NumericPass: return "NUMERIC-PASS";
  }
  return "?";
}

const char* mode_name(CheckMode m) { return m == CheckMode::Symbolic ? "symbolic" : "numeric"; }

void Report::merge(const Report& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

bool Report::ok() const { return failures() == 0; }

std::size_t Report::failures() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.status == Status::Fail;
  return n;
}

std::string Report::text(bool timings) const {
  std::ostringstream os;
  for (const auto& e : entries_) {
    os << status_name(e.status) << "  " << e.name << "  [" << mode_name(e.mode) << "]";
    if (timings) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %.3fs", e.seconds);
      os << buf;
    }
    os << "\n";
    if (!e.anchor.empty()) os << "    anchor: " << e.anchor << "\n";
    if (!e.residual.empty() && e.residual != "0") os << "    residual: " << e.residual << "\n";
    if (!e.detail.empty()) os << "    " << e.detail << "\n";
  }
  os << entries_.size() - failures() << "/" << entries_.size() << " checks passed\n";
  return os.str();
}

std::string Report::json(bool timings) const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    j["status"] = status_name(e.status);
    j["mode"] = mode_name(e.mode);
    j["residual"] = e.residual;
    j["anchor"] = e.anchor;
    j["seconds"] = timings ? e.seconds : 0.0;
    if (!e.detail.empty()) j["detail"] = e.detail;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["passed"] = ok();
  root["failures"] = failures();
  root["entries"] = std::move(arr);
  return root.dump(2) + "\n";
}

std::string truncate_rendering(const std::string& s, std::size_t max) {
  if (s.size() <= max) return s;
  return s.substr(0, max) + " ...";
}

ReportEntry check_zero(const std::string& name, const std::string& anchor, const Expr& residual,
                       const ZeroTester& tester) {
  ReportEntry e;
  e.name = name;
  e.anchor = anchor;
  auto start = std::chrono::steady_clock::now();
  ZeroTest z = tester.test(residual);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  e.mode = z.mode;
  if (!z.zero) {
    e.status = Status::Fail;
    e.residual = truncate_rendering(render(residual));
    char buf[64];
    std::snprintf(buf, sizeof buf, "max relative residual %.3e", z.max_relative);
    e.detail = buf;
  } else {
    e.status = z.mode == CheckMode::Symbolic ? Status::Pass : Status::NumericPass;
    if (z.mode == CheckMode::Numeric) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "max relative residual %.1e", z.max_relative);
      e.residual = buf;
    } else {
      e.residual = "0";
    }
  }
  return e;
}

ReportEntry check_bool(const std::string& name, const std::string& anchor, bool ok, const std::string& detail) {
  ReportEntry e;
  e.name = name;
  e.anchor = anchor;
  e.status = ok ? Status::Pass : Status::Fail;
  e.detail = detail;
  return e;
}

}  // namespace gardner
