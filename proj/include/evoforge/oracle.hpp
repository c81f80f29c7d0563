#pragma once

// Fitness sources for the evolutionary engine. An oracle holds the hidden
// target and answers correlational queries about candidate functions.

#include <cstdint>
#include <optional>
#include <vector>

#include "evoforge/bool_core.hpp"
#include "evoforge/perf.hpp"

namespace evoforge {

enum class PerfMode { kEmpirical, kExact };

struct OracleCounters {
  std::uint64_t estimates = 0;
  // Number of (candidate, target) sample pairs scored.
  std::uint64_t evaluations = 0;
  // Estimates charged to each target, indexed like the oracle's targets.
  std::vector<std::uint64_t> per_target_queries;
};

class PerformanceOracle {
 public:
  virtual ~PerformanceOracle() = default;

  // One fresh estimate of the candidate's fitness from the stream named by seed.
  virtual double estimate(const BooleanFunction& candidate, std::uint64_t seed) = 0;
  // True fitness, when enumeration is affordable.
  virtual std::optional<double> exact(const BooleanFunction& candidate) const = 0;

  virtual std::uint64_t samples() const noexcept = 0;
  virtual std::size_t targets_per_estimate() const noexcept = 0;
  virtual const OracleCounters& counters() const noexcept = 0;
};

// Perf_f(r) against a single target function.
class CorrelationOracle final : public PerformanceOracle {
 public:
  CorrelationOracle(BooleanFunction target, int n, std::uint64_t samples,
                    PerfMode mode = PerfMode::kEmpirical,
                    OutputConvention conv = OutputConvention::kSigned);

  double estimate(const BooleanFunction& candidate, std::uint64_t seed) override;
  std::optional<double> exact(const BooleanFunction& candidate) const override;
  std::uint64_t samples() const noexcept override { return samples_; }
  std::size_t targets_per_estimate() const noexcept override { return 1; }
  const OracleCounters& counters() const noexcept override { return counters_; }

 private:
  BooleanFunction target_;
  int n_;
  std::uint64_t samples_;
  PerfMode mode_;
  OutputConvention conv_;
  OracleCounters counters_;
};

// Fitness of a candidate clause against a chosen subset of the target's
// clauses: the aggregate (min/max/mean/median) of its correlations with each
// clause in the subset. A one-clause subset is plain term-wise access; the full
// set with kMax is "best correlation against any clause". Only clauses in the
// subset are ever read, and per_target_queries counts reads per target clause,
// exact diagnostics included.
// All clauses in the subset are scored on one shared sample stream. The target
// must outlive the oracle.
class ClauseOracle final : public PerformanceOracle {
 public:
  ClauseOracle(const MonotoneDnf& target, std::vector<std::size_t> subset, Aggregator agg, int n,
               std::uint64_t samples, PerfMode mode = PerfMode::kEmpirical);

  double estimate(const BooleanFunction& candidate, std::uint64_t seed) override;
  std::optional<double> exact(const BooleanFunction& candidate) const override;
  std::uint64_t samples() const noexcept override { return samples_; }
  std::size_t targets_per_estimate() const noexcept override { return subset_.size(); }
  const OracleCounters& counters() const noexcept override { return counters_; }

 private:
  const MonotoneDnf& target_;
  std::vector<std::size_t> subset_;
  Aggregator agg_;
  int n_;
  std::uint64_t samples_;
  PerfMode mode_;
  mutable OracleCounters counters_;
};

}  // namespace evoforge
