#pragma once

#include "petrovitch/precision.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace petrovitch {

/// One verified inequality or equality. `margin` is signed so that a passing
/// check has margin >= 0 (how far inside the bound the value sits).
struct Check {
  std::string name;
  bool pass = false;
  Real margin = 0;
  /// Position in the underlying sequence, -1 when not indexed.
  int index = -1;
  std::string detail;
};

struct CheckReport {
  std::vector<Check> checks;

  void add(Check c) { checks.push_back(std::move(c)); }
  void add(std::string name, bool pass, const Real& margin, int index = -1,
           std::string detail = {}) {
    checks.push_back({std::move(name), pass, margin, index, std::move(detail)});
  }
  void append(const CheckReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
  }
  /// Checks whose name starts with `prefix`.
  std::vector<Check> named(const std::string& prefix) const {
    std::vector<Check> out;
    for (const auto& c : checks) {
      if (c.name.rfind(prefix, 0) == 0) out.push_back(c);
    }
    return out;
  }
};

}  // namespace petrovitch
