#pragma once

#include <string>
#include <vector>

namespace thermsynth {

struct OracleResult {
  std::string name;
  bool passed = false;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
};

/// Hand-derived reference values checked against the library. Fast (well under a second).
std::vector<OracleResult> run_oracle_suite();

}  // namespace thermsynth
