#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cheeger/certificate.hpp"
#include "cheeger/harness/config.hpp"
#include "cheeger/harness/suites.hpp"

namespace cheeger::harness {

inline constexpr const char* kVersion = "cheegerlab 0.1.0";
inline constexpr const char* kWorkersEnv = "CHEEGERLAB_WORKERS";

/// One (instance, suite) pair of the expanded config.
struct TaskSpec {
  std::size_t id = 0;
  std::string generator;
  std::map<std::string, Scalar> params;
  std::uint64_t seed = 0;
  std::string suite;
};

/// Cartesian product of every family's parameter grid (keys in sorted
/// order), then seeds, then suites.
std::vector<TaskSpec> expand_tasks(const ExperimentConfig& config);

struct TaskRecord {
  std::size_t id = 0;
  std::string family;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::string suite;
  std::string status;  ///< passed, failed, error or skipped
  double wall_seconds = 0.0;
  std::size_t reports = 0;
  std::vector<std::string> failing;  ///< theorem ids of failed gating reports
  std::string message;               ///< error text or skip reason
  std::vector<std::string> labels;   ///< file family only
};

struct RunManifest {
  std::string version = kVersion;
  std::string config_hash;
  std::size_t workers = 0;
  std::vector<TaskRecord> tasks;
  double wall_seconds = 0.0;
  int exit_code = 0;
};

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::size_t> workers;
};

/// Worker count: the option, else the environment variable, else the
/// config, else hardware concurrency. Always at least one.
std::size_t resolve_workers(std::size_t configured, std::optional<std::size_t> option);

/// Runs every task on a bounded pool. Tasks fail in isolation; results are
/// written by a single writer in task order, so the output files do not
/// depend on the worker count. Failing certificates are listed on `log`.
RunManifest run_experiment(const ExperimentConfig& config, std::ostream& log,
                           const RunOptions& options = {});

/// Loads and runs a config. Exit 0 when every gating report passes, 1 when
/// some task failed or errored, 2 for a config error.
int run(const std::filesystem::path& config_path, std::ostream& log,
        const RunOptions& options = {});

/// JSON Schema of one report line, with the CSV column contracts under
/// "x-csv-series".
std::string report_schema();

/// One NDJSON line (no trailing newline).
std::string report_line(const TaskRecord& task, const Instance& instance,
                        const CertificateReport& report);

/// CSV column contracts, keyed by series name.
const std::vector<std::pair<std::string, std::vector<std::string>>>& csv_series();

}  // namespace cheeger::harness
