#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cheeger/certificate.hpp"
#include "cheeger/graph.hpp"
#include "cheeger/harness/config.hpp"

namespace cheeger::harness {

/// One generated (or loaded) graph of a family grid.
struct Instance {
  std::string generator;
  std::string params;  ///< canonical "key=value;key=value", keys sorted
  std::uint64_t seed = 0;
  WeightedGraph graph;
  std::vector<std::string> labels;  ///< file family: external vertex names
  /// A planted sparse set when the family has one: clique A of a dumbbell,
  /// part 0 of a planted partition.
  std::optional<VertexSet> planted;

  /// "generator[params]", used as the family column of every CSV series.
  std::string family() const;
};

/// Builds the instance. `params` holds one value per parameter; the seed
/// feeds the planted generator and every sampled check.
Instance make_instance(const std::string& generator, const std::map<std::string, Scalar>& params,
                       std::uint64_t seed);

/// "key=value;..." with values in shortest round-trip form.
std::string canonical_params(const std::map<std::string, Scalar>& params);

/// phi_target = top, top/2, ... down to 1/n^2: the retry grid for local
/// methods when phi(S) is unknown (alpha = 3 phi_target for pagerank).
std::vector<double> phi_target_grid(std::size_t n, double top);

struct CheegerRow {
  double lambda2 = 0.0;
  double phi_sweep = 0.0;
  double ratio = 0.0;  ///< phi_sweep / sqrt(2 lambda2)
};

/// One measured constant for an O(.) bound. `exact` is false when an input
/// such as phi^V(G) was replaced by a provable lower bound, which makes the
/// recorded value an upper estimate.
struct ConstantRow {
  std::string theorem_id;
  std::string constant;
  double value = 0.0;
  bool exact = true;
};

struct SuiteOutput {
  std::vector<CertificateReport> reports;
  std::vector<CheegerRow> cheeger;
  std::vector<ConstantRow> constants;
  std::string skipped;  ///< nonempty when the suite does not apply
};

/// Runs one suite on one instance. Library exceptions propagate; a suite that
/// does not apply to the instance returns `skipped` with the reason.
SuiteOutput run_suite(const std::string& suite, const Instance& instance, const Tolerances& tol);

}  // namespace cheeger::harness
