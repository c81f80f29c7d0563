#pragma once

// Named, seeded reproductions. Every report carries its full configuration so
// that a rerun from the report alone reproduces it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "evoforge/bool_core.hpp"
#include "evoforge/evo_engine.hpp"
#include "evoforge/perf.hpp"
#include "evoforge/representations.hpp"

namespace evoforge {

using Json = nlohmann::ordered_json;

// pass == |expected - actual| <= tolerance.
struct GoldenCheck {
  std::string label;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

GoldenCheck make_check(std::string label, double expected, double actual, double tolerance = 0.0);

// One CSV row: a generation of one trial.
struct TraceRow {
  std::size_t trial = 0;
  int generation = 0;
  std::string representation;
  double emp_perf = 0.0;
  std::optional<double> exact_perf;
  std::size_t n_beneficial = 0;
  std::size_t n_neutral = 0;
  Choice chose = Choice::kNeutral;
};

struct ExperimentReport {
  std::string name;
  Json params = Json::object();
  Json trials = Json::array();
  Json aggregates = Json::object();
  Json tables = Json::object();
  std::vector<GoldenCheck> golden_checks;
  std::vector<TraceRow> trace;

  bool all_checks_pass() const;
};

// Overrides shared by the evolution experiments. Unset fields take
// default_params() values.
struct EvolutionOverrides {
  std::optional<double> t;
  std::optional<std::uint64_t> s;
  std::optional<int> g;
  int q = 0;
  PerfMode mode = PerfMode::kEmpirical;
  // Worker cap; 0 means EVOFORGE_THREADS or hardware concurrency.
  unsigned threads = 0;
};

EvolutionParams resolve_params(int n, double epsilon, std::size_t neigh_cap,
                               const EvolutionOverrides& overrides);

// Worker count: explicit cap, else EVOFORGE_THREADS, else hardware.
unsigned worker_count(unsigned requested);

// Uniformly random size-`size` conjunction over x1..xn.
MonotoneConjunction random_conjunction(int n, int size, std::uint64_t seed);

// The three-literal hypothesis and three-clause target used throughout.
MonotoneDnf counterexample_hypothesis();
MonotoneDnf counterexample_target();

ExperimentReport run_counterexample();

struct ConjunctionExperiment {
  int n = 10;
  int target_size = 3;
  // Fixed target for every trial; otherwise a random one per trial.
  std::optional<MonotoneConjunction> target;
  double epsilon = 0.1;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  EvolutionOverrides overrides;
};
ExperimentReport run_conjunction_evolvability(const ConjunctionExperiment& cfg);

struct KdnfExperiment {
  MonotoneDnf target = counterexample_target();
  int n = 0;  // 0 means the target's largest variable index
  double epsilon = 0.1;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  TermFitness fitness = TermFitness::kIndexPaired;
  Aggregator aggregator = Aggregator::kMatchedMin;
  EvolutionOverrides overrides;
};
// Term-wise evolution against a k-DNF; reports matrix aggregates and the
// evaluation budget accounting for each trial.
ExperimentReport run_kdnf_evolvability(const KdnfExperiment& cfg);
// Joint distribution of global, MIN, MAX and MATCHED_MIN over trials.
ExperimentReport run_structural_vs_functional(const KdnfExperiment& cfg);
// Best-against-any clause fitness; duplicate convergence and literal
// frequencies, with a disjoint-clause control when n allows one.
ExperimentReport run_redundancy_bias(const KdnfExperiment& cfg);

struct ParityExperiment {
  int n = 10;
  int parity_size = 4;
  double epsilon = 0.5;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  EvolutionOverrides overrides;
};
ExperimentReport run_parity(const ParityExperiment& cfg);

// True iff two clauses of target share a variable.
bool has_shared_literal(const MonotoneDnf& target);

}  // namespace evoforge
