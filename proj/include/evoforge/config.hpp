#pragma once

// Flat "key = value" run configuration, experiment dispatch, and output files.
//
//   # comment
//   experiment = structural_vs_functional
//   target = x1&x4&x5 | x2&x4&x6 | x3&x7&x8
//   epsilon = 0.1
//   trials = 50

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evoforge/experiments.hpp"

namespace evoforge {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kValidation, kIndex };

  ConfigError(Kind kind, std::string field, int line, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }
  // 1-based; 0 when not tied to a line.
  int line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::string field_;
  int line_;
};

struct ExperimentInfo {
  std::string_view name;
  std::string_view description;
};
const std::vector<ExperimentInfo>& list_experiments();

struct RunConfig {
  std::string experiment;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<double> epsilon;
  std::optional<std::string> target;
  std::optional<int> target_size;
  std::optional<int> parity_size;
  std::optional<Aggregator> aggregator;
  std::optional<TermFitness> fitness;
  std::optional<double> t;
  std::optional<std::uint64_t> s;
  std::optional<int> g;
  int q = 0;
  std::optional<std::size_t> trials;
  std::uint64_t seed = 0;
  PerfMode mode = PerfMode::kEmpirical;
  std::string out_dir = "evoforge_out";
  bool write_json = true;
  bool write_csv = true;
  bool write_txt = true;
  unsigned threads = 0;
};

RunConfig parse_config(std::string_view text);
// Re-validates after command-line overrides.
void validate(const RunConfig& cfg);
// Key-value text that parses back to the same experiment (output settings
// omitted).
std::string format_config(const RunConfig& cfg);

ExperimentReport run_experiment(const RunConfig& cfg);

// Runs the experiment and writes report.json, trace.csv and summary.txt.
// Returns 0 on success, 1 if a golden check failed, 2 on configuration or
// output errors.
int run(const RunConfig& cfg, std::ostream& log);

struct PerfQuery {
  std::string r;
  std::string f;
  int n = 1;
  OutputConvention conv = OutputConvention::kSigned;
  // Unset means exact enumeration.
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
};

// One line: value and provenance.
std::string perf_query(const PerfQuery& q);

}  // namespace evoforge
