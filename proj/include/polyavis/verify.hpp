#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace polyavis {

/// One invariant: the measured quantity and the tolerance it must stay within.
struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

/// Suites: "numtheory", "exact", "lemma", "walks", or "all".
/// Every check runs; an exception inside one is recorded as its failure.
/// Throws std::invalid_argument for an unknown suite name.
std::vector<CheckResult> run_verification(std::string_view suite);

/// Chi-square statistic and its upper-tail p-value.
struct ChiSquare {
  double statistic = 0.0;
  double p_value = 0.0;
  int degrees_of_freedom = 0;
};
ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected);

}  // namespace polyavis
