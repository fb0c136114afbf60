#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cheeger::harness {

/// Malformed or inconsistent experiment config. `line` is 0 when the problem
/// is not tied to one line (a missing key, say).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "config line " + std::to_string(line) + ": " + what
                                : "config: " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using Scalar = std::variant<std::int64_t, double, bool, std::string>;

/// One generator with its parameter grid. Every parameter holds the list of
/// values to sweep; a scalar in the file becomes a one-element list.
struct FamilySpec {
  std::string generator;
  std::map<std::string, std::vector<Scalar>> params;
  std::vector<std::uint64_t> seeds;
  std::size_t line = 0;
};

/// Tolerances used by the harness's own comparisons. Library certificates
/// keep their built-in slack.
struct Tolerances {
  double cheeger_relative = 1e-7;   ///< both sides of the Cheeger sandwich
  double eigen_oracle = 1e-7;       ///< Lanczos vs dense eigenvalues
  double spectrum_mapping = 1e-8;   ///< spectrum of W^t vs 1 - (1 - lambda/2)^t
  double push_sandwich = 1e-10;     ///< r >= r' >= r - eps, entrywise
  double truncation_sandwich = 1e-12;
};

struct ExperimentConfig {
  std::vector<FamilySpec> families;
  std::vector<std::string> suites;
  Tolerances tolerances;
  std::filesystem::path output_dir = "cheegerlab-out";
  std::size_t workers = 0;  ///< 0: hardware concurrency
  std::string text;         ///< verbatim source, hashed into the manifest
};

/// Parses the TOML subset described in docs/config.md and validates every
/// generator, parameter and suite name.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

const std::vector<std::string>& generator_names();
const std::vector<std::string>& suite_names();

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace cheeger::harness
