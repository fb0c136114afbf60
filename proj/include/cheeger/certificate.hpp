#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cheeger/expansion.hpp"

namespace cheeger {

/// Outcome of one executable check.
///
/// `lhs relation rhs` is the deciding inequality, evaluated at the witness on
/// success and at the worst offender on failure. Non-gating reports carry
/// measurements only; their `pass` never fails a run.
struct CertificateReport {
  std::string theorem_id;
  bool pass = false;
  bool gating = true;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  std::string relation = "<=";
  std::optional<std::size_t> witness_prefix;  ///< 1-based prefix size
  std::optional<ExpansionStats> witness;
  std::map<std::string, double> scalars;
  std::vector<std::string> notes;
  std::string counterexample;  ///< empty when pass
};

/// Default slack: absolute 1e-8 plus relative 1e-8.
struct Slack {
  double absolute = 1e-8;
  double relative = 1e-8;

  bool leq(double lhs, double rhs) const {
    if (std::isinf(rhs) && rhs > 0) return true;
    return lhs <= rhs + absolute + relative * std::abs(rhs);
  }
  bool geq(double lhs, double rhs) const { return leq(rhs, lhs); }
};

/// "lhs <= rhs (lhs=..., rhs=...)" with 17 significant digits.
std::string describe_violation(const std::string& what, double lhs, const char* relation,
                               double rhs);

}  // namespace cheeger
