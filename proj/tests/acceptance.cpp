#include <cstdio>
#include <cstdlib>

#include "gardner/suite.hpp"

using namespace gardner;

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 0) : 0x5eedULL;
  int failed = 0;
  for (const auto& c : criteria()) {
    CriterionOutcome o = run_criterion(c, seed);
    std::size_t total = o.report.entries().size();
    std::size_t bad = o.report.failures();
    std::printf("criterion %2d %s  %s (%zu/%zu checks, %.2f s)\n", c.number, o.passed() ? "PASS" : "FAIL",
                c.title.c_str(), total - bad, total, o.seconds);
    std::fflush(stdout);
    if (!o.passed()) {
      ++failed;
      for (const auto& e : o.report.entries())
        if (e.status == Status::Fail)
          std::fprintf(stderr, "  criterion %d: %s [%s] %s %s\n", c.number, e.name.c_str(), e.anchor.c_str(),
                       e.residual.c_str(), e.detail.c_str());
    }
  }
  return failed == 0 ? 0 : 1;
}
