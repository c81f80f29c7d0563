#pragma once

// Concrete representation classes: monotone conjunctions under
// add / remove / swap mutations, and term-wise k-DNF evolution built on them.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evoforge/bool_core.hpp"
#include "evoforge/evo_engine.hpp"
#include "evoforge/perf.hpp"

namespace evoforge {

// Self, each single-variable addition (while |vars| < q), each removal, and
// each swap of a present variable for an absent one, in that order.
std::vector<MonotoneConjunction> conj_neighborhood(const MonotoneConjunction& r, int n, int q);

// Uniform mu over the neighborhood.
std::vector<double> conj_mutation_weights(const MonotoneConjunction& r,
                                          const std::vector<MonotoneConjunction>& hood);

// Largest possible conj_neighborhood size at dimension n: 1 + n + floor(n^2/4).
std::size_t conj_neighborhood_cap(int n);

// Clause size cap ceil(log2(3/eps)).
int short_clause_cap(double epsilon);

class ConjunctionClass {
 public:
  using Representation = MonotoneConjunction;

  // q = 0 means uncapped (q = n).
  explicit ConjunctionClass(int n, int q = 0);

  int n() const noexcept { return n_; }
  int q() const noexcept { return q_; }

  BooleanFunction function(const MonotoneConjunction& r) const { return r; }
  std::vector<MonotoneConjunction> neighborhood(const MonotoneConjunction& r, double) const {
    return conj_neighborhood(r, n_, q_);
  }
  std::vector<double> mutation_weights(const MonotoneConjunction& r,
                                       const std::vector<MonotoneConjunction>& hood) const {
    return conj_mutation_weights(r, hood);
  }
  std::string describe(const MonotoneConjunction& r) const { return r.to_string(); }

 private:
  int n_;
  int q_;
};

static_assert(RepresentationClass<ConjunctionClass>);

using ConjunctionTrace = EvolutionTrace<MonotoneConjunction>;

// Evolves against a single conjunction target under SIGNED correlation.
ConjunctionTrace evolve_conjunction(const MonotoneConjunction& target, const EvolutionParams& params,
                                    const MonotoneConjunction& r0 = {}, int q = 0,
                                    PerfMode mode = PerfMode::kEmpirical);

// How each term's fitness is obtained.
enum class TermFitness {
  // Term j is scored only against target clause j.
  kIndexPaired,
  // Term j is scored by the plan's aggregator over its correlations with every
  // target clause (kMax: best against any clause).
  kAggregateAll,
};

std::string_view to_string(TermFitness f);
TermFitness parse_term_fitness(std::string_view text);

struct DnfEvolutionPlan {
  std::size_t k = 1;
  // Per-term parameters; term j runs with seed derive_seed(seed, {j}).
  EvolutionParams term_params;
  Aggregator aggregator = Aggregator::kMatchedMin;
  TermFitness fitness = TermFitness::kIndexPaired;
  // Order in which terms are evolved; empty means 0..k-1.
  std::vector<std::size_t> combine_order;
  MonotoneConjunction r0;
  int q = 0;
  PerfMode mode = PerfMode::kEmpirical;
};

std::uint64_t term_seed(const DnfEvolutionPlan& plan, std::size_t term);

struct KdnfResult {
  MonotoneDnf dnf{MonotoneConjunction{}};
  // Indexed by term (hypothesis clause) number, not by run order.
  std::vector<ConjunctionTrace> traces;
  std::vector<std::size_t> order;
  PerfMatrix matrix{1, OutputConvention::kSigned};
  std::array<double, 5> gen_perf{};  // indexed like kAllAggregators
  std::optional<double> global_perf;  // exact SIGNED Perf of dnf vs target
  // clause_reads[j][i]: reads of target clause i made while evolving term j.
  std::vector<std::vector<std::uint64_t>> clause_reads;
  std::uint64_t total_evaluations = 0;
  // Evaluation ceiling for one term: estimate_budget * s * clauses per estimate.
  std::uint64_t term_evaluation_budget = 0;

  double gen_perf_of(Aggregator agg) const;
};

KdnfResult evolve_kdnf(const MonotoneDnf& target, const DnfEvolutionPlan& plan);

}  // namespace evoforge
