#pragma once

#include <string>
#include <vector>

namespace heunbc::verify {

// One check of the acceptance battery.  measured and tolerance belong to the
// sub-check that came closest to its bound (or crossed it); detail names that
// sub-check.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// Runs the twelve acceptance checks in order.  quick shrinks grid sizes and
// family degrees so the battery finishes in a few seconds; every gate keeps
// its full-size tolerance.  A check that throws is reported failed with the
// error message in detail, and never aborts the battery.
std::vector<CriterionResult> run_all(bool quick);

}  // namespace heunbc::verify
