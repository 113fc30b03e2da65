#pragma once

#include <string>
#include <vector>

namespace ncglab {

// One named check: a measured quantity against its allowed bound.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct Report {
  std::vector<Check> checks;

  void add(std::string name, double value, double bound) {
    checks.push_back({std::move(name), value, bound, value <= bound});
  }
  void add_flag(std::string name, bool ok, double value = 0.0, double bound = 0.0) {
    checks.push_back({std::move(name), value, bound, ok});
  }
  void merge(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  }

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  double max_violation() const {
    double v = 0.0;
    for (const auto& c : checks)
      if (c.value > v) v = c.value;
    return v;
  }
};

}  // namespace ncglab
