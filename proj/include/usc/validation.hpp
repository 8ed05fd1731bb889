#pragma once

#include "usc/dissipators.hpp"
#include "usc/model.hpp"

#include <string>
#include <vector>

namespace usc {

enum class Comparison { Within, Below, Above };

struct CheckResult {
  int criterion = 0;
  std::string name;
  Comparison comparison = Comparison::Within;
  double expected = 0.0;  // target value, or the bound for Below / Above
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  /// "47", "<5", ">0.9".
  std::string expected_text() const;
};

CheckResult check_within(int criterion, std::string name, double expected, double actual,
                         double tolerance);
CheckResult check_below(int criterion, std::string name, double bound, double actual);
CheckResult check_above(int criterion, std::string name, double bound, double actual);

struct ValidationOptions {
  DeviceParams device;
  BathSpec baths;
  int threads = 1;
};

inline constexpr int kCriterionCount = 9;

/// All checks for one acceptance criterion, including a wall-clock check.
std::vector<CheckResult> run_criterion(int criterion, const ValidationOptions& options = {});

std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace usc
