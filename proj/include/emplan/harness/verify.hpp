#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emplan::harness {

struct CheckMetric {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

struct CheckResult {
  std::string name;
  std::vector<CheckMetric> metrics;

  bool passed() const;
};

/// Names accepted by runVerification's `only` filter, in run order.
const std::vector<std::string>& verificationChecks();

/// Runs the oracle checks (all of them when `only` is empty). Unknown names
/// throw UsageError.
std::vector<CheckResult> runVerification(const std::vector<std::string>& only = {});

void writeVerificationReport(std::ostream& out, const std::vector<CheckResult>& results);
/// `check,metric,value,tolerance,passed`.
void writeVerificationCsv(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace emplan::harness
