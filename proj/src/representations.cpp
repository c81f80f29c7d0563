#include "evoforge/representations.hpp"

#include <cmath>
#include <numeric>

#include "evoforge/oracle.hpp"
#include "evoforge/rng.hpp"

namespace evoforge {

std::vector<MonotoneConjunction> conj_neighborhood(const MonotoneConjunction& r, int n, int q) {
  if (q <= 0 || q > n) q = n;
  if (r.max_index() > n) throw DimensionError("representation mentions a variable beyond n");
  if (r.size() > q) throw std::invalid_argument("representation exceeds the clause size cap");

  const std::vector<int> present = r.vars();
  std::vector<int> absent;
  for (int v = 1; v <= n; ++v) {
    if (!r.contains(v)) absent.push_back(v);
  }

  // Additions, removals and swaps land on pairwise distinct sets, so no
  // deduplication pass is needed.
  std::vector<MonotoneConjunction> hood;
  hood.reserve(1 + absent.size() + present.size() * (1 + absent.size()));
  hood.push_back(r);
  if (r.size() < q) {
    for (int v : absent) hood.push_back(r.with(v));
  }
  for (int v : present) hood.push_back(r.without(v));
  for (int out : present) {
    const MonotoneConjunction base = r.without(out);
    for (int in : absent) hood.push_back(base.with(in));
  }
  return hood;
}

std::vector<double> conj_mutation_weights(const MonotoneConjunction&,
                                          const std::vector<MonotoneConjunction>& hood) {
  if (hood.empty()) throw ContractError("empty neighborhood");
  return std::vector<double>(hood.size(), 1.0 / static_cast<double>(hood.size()));
}

std::size_t conj_neighborhood_cap(int n) {
  const auto m = static_cast<std::size_t>(n);
  return 1 + m + (m * m) / 4;
}

int short_clause_cap(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
  return static_cast<int>(std::ceil(std::log2(3.0 / epsilon)));
}

ConjunctionClass::ConjunctionClass(int n, int q) : n_(n), q_(q <= 0 || q > n ? n : q) {
  if (n < 1 || n > kMaxDimension) throw DimensionError("dimension outside [1..64]");
}

ConjunctionTrace evolve_conjunction(const MonotoneConjunction& target, const EvolutionParams& params,
                                    const MonotoneConjunction& r0, int q, PerfMode mode) {
  const ConjunctionClass cls(params.n, q);
  if (target.size() > cls.q()) throw std::invalid_argument("target exceeds the clause size cap");
  if (r0.size() > cls.q()) throw std::invalid_argument("r0 exceeds the clause size cap");
  check_dimension(r0, params.n);
  CorrelationOracle oracle(target, params.n, params.s, mode);
  return evolve(r0, cls, oracle, params);
}

std::string_view to_string(TermFitness f) {
  return f == TermFitness::kIndexPaired ? "index_paired" : "aggregate_all";
}

TermFitness parse_term_fitness(std::string_view text) {
  if (text == "index_paired") return TermFitness::kIndexPaired;
  if (text == "aggregate_all") return TermFitness::kAggregateAll;
  throw ParseError("unknown term fitness '" + std::string(text) + "'");
}

std::uint64_t term_seed(const DnfEvolutionPlan& plan, std::size_t term) {
  return derive_seed(plan.term_params.seed, {static_cast<std::uint64_t>(term)});
}

double KdnfResult::gen_perf_of(Aggregator agg) const {
  for (std::size_t i = 0; i < std::size(kAllAggregators); ++i) {
    if (kAllAggregators[i] == agg) return gen_perf[i];
  }
  throw std::invalid_argument("unknown aggregator");
}

KdnfResult evolve_kdnf(const MonotoneDnf& target, const DnfEvolutionPlan& plan) {
  const std::size_t k = plan.k;
  if (k < 1) throw std::invalid_argument("plan needs k >= 1");
  if (target.k() != k) {
    throw KMismatchError("plan expects " + std::to_string(k) + " clauses, target has " +
                         std::to_string(target.k()));
  }
  const int n = plan.term_params.n;
  check_dimension(target, n);
  validate(plan.term_params);

  std::vector<std::size_t> order = plan.combine_order;
  if (order.empty()) {
    order.resize(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  {
    std::vector<char> seen(k, 0);
    if (order.size() != k) throw std::invalid_argument("combine order must list every term once");
    for (auto j : order) {
      if (j >= k || seen[j]) throw std::invalid_argument("combine order must list every term once");
      seen[j] = 1;
    }
  }

  const ConjunctionClass cls(n, plan.q);
  const Aggregator term_agg =
      plan.fitness == TermFitness::kIndexPaired ? Aggregator::kMax : plan.aggregator;
  std::vector<std::size_t> all(k);
  std::iota(all.begin(), all.end(), std::size_t{0});

  KdnfResult out;
  out.order = order;
  out.traces.resize(k);
  out.clause_reads.assign(k, std::vector<std::uint64_t>(k, 0));
  std::vector<MonotoneConjunction> evolved(k);

  const std::size_t clauses_per_estimate = plan.fitness == TermFitness::kIndexPaired ? 1 : k;
  out.term_evaluation_budget =
      estimate_budget(plan.term_params) * plan.term_params.s * clauses_per_estimate;

  for (std::size_t j : order) {
    std::vector<std::size_t> subset =
        plan.fitness == TermFitness::kIndexPaired ? std::vector<std::size_t>{j} : all;
    ClauseOracle oracle(target, std::move(subset), term_agg, n, plan.term_params.s, plan.mode);
    EvolutionParams params = plan.term_params;
    params.seed = term_seed(plan, j);
    out.traces[j] = evolve(plan.r0, cls, oracle, params);
    evolved[j] = out.traces[j].final_repr();
    out.clause_reads[j] = oracle.counters().per_target_queries;
    out.total_evaluations += out.traces[j].evaluations;
  }

  out.dnf = MonotoneDnf(evolved);
  out.matrix = term_perf_matrix(out.dnf, target, n, ExactMode{});
  for (std::size_t a = 0; a < std::size(kAllAggregators); ++a) {
    out.gen_perf[a] = gen_perf(out.matrix, kAllAggregators[a]);
  }
  if (n <= kMaxExactDimension) out.global_perf = exact_perf(out.dnf, target, n).value();
  return out;
}

}  // namespace evoforge
