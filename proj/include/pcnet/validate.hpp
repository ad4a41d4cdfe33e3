#pragma once

#include <string>
#include <vector>

#include "pcnet/core.hpp"

namespace pcnet {

enum class Severity { Warning, Error };

struct Issue {
  Severity severity = Severity::Error;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Issue> issues;

  void add(Severity severity, std::string location, std::string message);
  std::size_t error_count() const;
  std::string to_string() const;
};

// Checks every structural and probabilistic invariant of the net and
// returns all violations, not only the first. Derived diagrams, when
// present, are checked against their children with the bottom-up mixture
// rule; the preference model, when present, is checked for completeness.
ValidationReport validate(const PcNet& net);

}  // namespace pcnet
