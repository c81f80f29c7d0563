#pragma once

// Mutation-selection dynamics over an arbitrary representation class: the
// class supplies (R, Neigh, mu), the parameters supply the tolerance t and the
// sample / generation budgets, and an oracle supplies the fitness.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evoforge/bool_core.hpp"
#include "evoforge/oracle.hpp"
#include "evoforge/rng.hpp"

namespace evoforge {

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EvolutionParams {
  int n = 1;
  double epsilon = 0.1;
  // Minimum fitness change that counts as non-neutral.
  double t = 0.0125;
  // Samples per performance estimate.
  std::uint64_t s = 1;
  // Generation budget.
  int g = 1;
  std::uint64_t seed = 0;
  // Hard cap on |Neigh(r, epsilon)|.
  std::size_t neigh_cap = 1;
};

// t = eps/8, g = ceil(12 n / eps), s = ceil(8/t^2 * ln(4 g cap / 0.05)).
EvolutionParams default_params(int n, double epsilon, std::size_t neigh_cap);
void validate(const EvolutionParams& params);

// Worst-case oracle estimates of one evolve() call: at most neigh_cap per
// generation for the neighborhood (the current representation is its own
// self-neighbor), one success confirmation per generation, and the
// generation-0 check with its confirmation.
std::uint64_t estimate_budget(const EvolutionParams& params);

enum class Choice { kBeneficial, kNeutral };
std::string_view to_string(Choice c);

struct Classification {
  std::vector<std::size_t> beneficial;
  std::vector<std::size_t> neutral;
};

// beneficial: perf >= current + t; neutral: |perf - current| < t; the rest are
// deleterious and dropped.
Classification classify_neighborhood(double current_perf, std::span<const double> neighbor_perfs,
                                     double t);

template <typename C>
concept RepresentationClass = requires(const C& cls, const typename C::Representation& r,
                                       double epsilon,
                                       const std::vector<typename C::Representation>& hood) {
  { cls.function(r) } -> std::convertible_to<BooleanFunction>;
  { cls.neighborhood(r, epsilon) } -> std::same_as<std::vector<typename C::Representation>>;
  { cls.mutation_weights(r, hood) } -> std::same_as<std::vector<double>>;
  { cls.describe(r) } -> std::convertible_to<std::string>;
  requires std::equality_comparable<typename C::Representation>;
};

template <typename Rep>
struct GenerationRecord {
  int gen = 0;
  // The representation selected in this generation.
  Rep repr;
  // Its estimate from the selection round.
  double emp_perf = 0.0;
  std::optional<double> exact_perf;
  // Fresh re-estimate, taken only when emp_perf cleared the success bar.
  std::optional<double> confirm_perf;
  std::size_t neighborhood_size = 0;
  std::size_t n_beneficial = 0;
  std::size_t n_neutral = 0;
  Choice chose = Choice::kNeutral;
};

template <typename Rep>
struct EvolutionTrace {
  EvolutionParams params;
  Rep initial;
  double initial_emp_perf = 0.0;
  std::optional<double> initial_exact_perf;
  std::optional<double> initial_confirm_perf;
  std::vector<GenerationRecord<Rep>> records;
  bool succeeded = false;
  std::optional<int> success_gen;
  std::uint64_t estimates = 0;
  std::uint64_t evaluations = 0;

  const Rep& final_repr() const { return records.empty() ? initial : records.back().repr; }
};

template <typename Rep>
struct StepResult {
  Rep next;
  GenerationRecord<Rep> record;
};

namespace detail {

template <typename Rep>
std::size_t self_index(const std::vector<Rep>& hood, const Rep& r) {
  const auto it = std::find(hood.begin(), hood.end(), r);
  if (it == hood.end()) throw ContractError("neighborhood does not contain the representation");
  return static_cast<std::size_t>(it - hood.begin());
}

inline void check_weights(std::span<const double> weights, std::size_t expected) {
  if (weights.size() != expected) throw ContractError("mutation weights do not match neighborhood");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ContractError("mutation weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ContractError("mutation weights must sum to 1");
}

inline std::size_t weighted_pick(std::span<const std::size_t> members,
                                 std::span<const double> weights, SplitMix64& rng) {
  double total = 0.0;
  for (auto idx : members) total += weights[idx];
  double u = rng.uniform() * total;
  for (auto idx : members) {
    u -= weights[idx];
    if (u < 0.0) return idx;
  }
  return members.back();
}

}  // namespace detail

// One generation: estimate the current representation and its neighbors on
// fresh samples, classify, and draw the successor from the beneficial set if
// nonempty, else from the neutral set, proportionally to mu.
template <RepresentationClass C>
StepResult<typename C::Representation> step(const typename C::Representation& current,
                                            const C& cls, PerformanceOracle& oracle,
                                            const EvolutionParams& params,
                                            std::uint64_t step_seed) {
  using Rep = typename C::Representation;
  std::vector<Rep> hood = cls.neighborhood(current, params.epsilon);
  if (hood.size() > params.neigh_cap) {
    throw ContractError("neighborhood of size " + std::to_string(hood.size()) +
                        " exceeds the cap " + std::to_string(params.neigh_cap));
  }
  const std::size_t self = detail::self_index(hood, current);
  const std::vector<double> weights = cls.mutation_weights(current, hood);
  detail::check_weights(weights, hood.size());

  const double current_perf = oracle.estimate(cls.function(current), derive_seed(step_seed, {0}));
  std::vector<double> perfs(hood.size());
  for (std::size_t j = 0; j < hood.size(); ++j) {
    perfs[j] = j == self ? current_perf
                         : oracle.estimate(cls.function(hood[j]), derive_seed(step_seed, {1, j}));
  }

  const Classification cl = classify_neighborhood(current_perf, perfs, params.t);
  const bool beneficial = !cl.beneficial.empty();
  const auto& pool = beneficial ? cl.beneficial : cl.neutral;
  SplitMix64 rng(derive_seed(step_seed, {2}));
  const std::size_t pick = detail::weighted_pick(pool, weights, rng);

  GenerationRecord<Rep> rec{};
  rec.repr = hood[pick];
  rec.emp_perf = perfs[pick];
  rec.exact_perf = oracle.exact(cls.function(hood[pick]));
  rec.neighborhood_size = hood.size();
  rec.n_beneficial = cl.beneficial.size();
  rec.n_neutral = cl.neutral.size();
  rec.chose = beneficial ? Choice::kBeneficial : Choice::kNeutral;
  return {hood[pick], std::move(rec)};
}

// Runs up to params.g generations from r0, stopping at the first generation
// whose selected representation clears perf > 1 - epsilon on its selection
// estimate and on one independent re-estimate. r0 is checked the same way
// before the first generation.
template <RepresentationClass C>
EvolutionTrace<typename C::Representation> evolve(const typename C::Representation& r0,
                                                  const C& cls, PerformanceOracle& oracle,
                                                  const EvolutionParams& params) {
  validate(params);
  const std::uint64_t estimates_before = oracle.counters().estimates;
  const std::uint64_t evaluations_before = oracle.counters().evaluations;

  EvolutionTrace<typename C::Representation> trace{};
  trace.params = params;
  trace.initial = r0;
  trace.initial_emp_perf = oracle.estimate(cls.function(r0), derive_seed(params.seed, {0, 0}));
  trace.initial_exact_perf = oracle.exact(cls.function(r0));

  auto confirmed = [&](const typename C::Representation& r, int gen, std::optional<double>& slot) {
    slot = oracle.estimate(cls.function(r), derive_seed(params.seed, {static_cast<std::uint64_t>(gen), 1}));
    return global_success(*slot, params.epsilon);
  };

  if (global_success(trace.initial_emp_perf, params.epsilon) &&
      confirmed(r0, 0, trace.initial_confirm_perf)) {
    trace.succeeded = true;
    trace.success_gen = 0;
  }

  auto current = r0;
  for (int gen = 1; gen <= params.g && !trace.succeeded; ++gen) {
    auto [next, rec] = step(current, cls, oracle, params,
                            derive_seed(params.seed, {static_cast<std::uint64_t>(gen), 0}));
    rec.gen = gen;
    current = next;
    if (global_success(rec.emp_perf, params.epsilon) && confirmed(current, gen, rec.confirm_perf)) {
      trace.succeeded = true;
      trace.success_gen = gen;
    }
    trace.records.push_back(std::move(rec));
  }

  trace.estimates = oracle.counters().estimates - estimates_before;
  trace.evaluations = oracle.counters().evaluations - evaluations_before;
  if (trace.estimates > estimate_budget(params)) {
    throw ContractError("evolution exceeded its estimate budget");
  }
  return trace;
}

}  // namespace evoforge
