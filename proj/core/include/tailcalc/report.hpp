#ifndef TAILCALC_REPORT_HPP
#define TAILCALC_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace tailcalc {

enum class CheckMode { Exact, MonteCarlo };

inline const char* toString(CheckMode m) {
  return m == CheckMode::Exact ? "exact" : "montecarlo";
}

// Structured pass/fail record for one identity instance.
struct IdentityReport {
  std::string identity;        // fixed identity name, e.g. "mecke"
  std::string testFunctionId;  // which test function / sub-case
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  bool pass = false;
  CheckMode mode = CheckMode::Exact;
  // Monte Carlo extras
  std::optional<double> seLhs;
  std::optional<double> seRhs;
  std::optional<long long> sampleCount;
  std::string note;

  static IdentityReport exact(std::string identity, std::string testId, double lhs,
                              double rhs, double tol) {
    IdentityReport r;
    r.identity = std::move(identity);
    r.testFunctionId = std::move(testId);
    r.lhs = lhs;
    r.rhs = rhs;
    r.tol = tol;
    r.pass = compareValues(lhs, rhs, tol);
    return r;
  }

  static IdentityReport monteCarlo(std::string identity, std::string testId, double lhs,
                                   double rhs, double seLhs, double seRhs, long long n,
                                   double floor = 1e-3) {
    IdentityReport r;
    r.identity = std::move(identity);
    r.testFunctionId = std::move(testId);
    r.lhs = lhs;
    r.rhs = rhs;
    r.mode = CheckMode::MonteCarlo;
    r.seLhs = seLhs;
    r.seRhs = seRhs;
    r.sampleCount = n;
    r.tol = 3.0 * (seLhs + seRhs) + floor;
    r.pass = std::abs(lhs - rhs) <= r.tol;
    return r;
  }

  // exact comparison; +infinity on both sides counts as equal
  static bool compareValues(double lhs, double rhs, double tol) {
    if (std::isinf(lhs) || std::isinf(rhs)) return lhs == rhs;
    return std::abs(lhs - rhs) <= tol;
  }
};

inline void sortReports(std::vector<IdentityReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const IdentityReport& a, const IdentityReport& b) {
                     if (a.identity != b.identity) return a.identity < b.identity;
                     return a.testFunctionId < b.testFunctionId;
                   });
}

struct ReportSummary {
  int passed = 0;
  int failed = 0;
  int skipped = 0;
};

inline ReportSummary summarize(const std::vector<IdentityReport>& reports) {
  ReportSummary s;
  for (const IdentityReport& r : reports)
    (r.pass ? s.passed : s.failed)++;
  return s;
}

// A Monte Carlo point estimate with its standard error.
struct Estimate {
  double mean = 0.0;
  double standardError = 0.0;
  long long sampleCount = 0;
};

}  // namespace tailcalc

#endif  // TAILCALC_REPORT_HPP
