#include "evoforge/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "evoforge/rng.hpp"

namespace evoforge {

namespace {

constexpr std::uint64_t kTargetTag = 1;
constexpr std::uint64_t kEvolutionTag = 2;

// Runs fn(i) for i in [0, count) on up to `workers` threads. Results are
// written by index, so the output order never depends on scheduling.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t count, unsigned workers, Fn&& fn) {
  std::vector<Result> results(count);
  if (count == 0) return results;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            results[i] = fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

double lower_quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return values[static_cast<std::size_t>(std::floor(q * static_cast<double>(values.size() - 1)))];
}

Json quantiles(const std::vector<double>& values) {
  if (values.empty()) return nullptr;
  return Json{{"min", lower_quantile(values, 0.0)},
              {"median", lower_quantile(values, 0.5)},
              {"p90", lower_quantile(values, 0.9)},
              {"max", lower_quantile(values, 1.0)}};
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Json params_json(const EvolutionParams& p) {
  return Json{{"n", p.n},         {"epsilon", p.epsilon}, {"t", p.t},
              {"s", p.s},         {"g", p.g},             {"seed", p.seed},
              {"neigh_cap", p.neigh_cap}};
}

Json overrides_json(const EvolutionOverrides& o) {
  return Json{{"t", optional_json(o.t)},
              {"s", o.s ? Json(*o.s) : Json(nullptr)},
              {"g", o.g ? Json(*o.g) : Json(nullptr)},
              {"q", o.q},
              {"mode", o.mode == PerfMode::kExact ? "exact" : "empirical"}};
}

Json matrix_json(const PerfMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.k(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.k(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json gen_perf_json(const KdnfResult& r) {
  Json out = Json::object();
  for (std::size_t a = 0; a < std::size(kAllAggregators); ++a) {
    out[std::string(to_string(kAllAggregators[a]))] = r.gen_perf[a];
  }
  return out;
}

void append_trace(std::vector<TraceRow>& rows, std::size_t trial, const ConjunctionTrace& trace) {
  for (const auto& rec : trace.records) {
    rows.push_back(TraceRow{trial, rec.gen, rec.repr.to_string(), rec.emp_perf, rec.exact_perf,
                            rec.n_beneficial, rec.n_neutral, rec.chose});
  }
}

// Rows for a term-wise run: generations are numbered cumulatively in plan order
// and every row shows the whole k-clause hypothesis, with terms not yet evolved
// still at r0.
void append_kdnf_trace(std::vector<TraceRow>& rows, std::size_t trial, const KdnfResult& result,
                       const MonotoneConjunction& r0) {
  std::vector<MonotoneConjunction> state(result.traces.size(), r0);
  int offset = 0;
  for (std::size_t j : result.order) {
    const auto& trace = result.traces[j];
    for (const auto& rec : trace.records) {
      state[j] = rec.repr;
      rows.push_back(TraceRow{trial, offset + rec.gen, MonotoneDnf(state).to_string(), rec.emp_perf,
                              rec.exact_perf, rec.n_beneficial, rec.n_neutral, rec.chose});
    }
    state[j] = trace.final_repr();
    offset += static_cast<int>(trace.records.size());
  }
}

Json conjunction_trial_json(std::size_t trial, const MonotoneConjunction& target,
                            const ConjunctionTrace& trace) {
  const auto& last_perf = trace.records.empty() ? trace.initial_emp_perf : trace.records.back().emp_perf;
  const auto& last_exact =
      trace.records.empty() ? trace.initial_exact_perf : trace.records.back().exact_perf;
  return Json{{"trial", trial},
              {"seed", trace.params.seed},
              {"target", target.to_string()},
              {"result", trace.final_repr().to_string()},
              {"succeeded", trace.succeeded},
              {"success_gen", trace.success_gen ? Json(*trace.success_gen) : Json(nullptr)},
              {"generations", trace.records.size()},
              {"final_emp_perf", last_perf},
              {"final_exact_perf", optional_json(last_exact)},
              {"estimates", trace.estimates},
              {"evaluations", trace.evaluations},
              {"estimate_budget", estimate_budget(trace.params)}};
}

DnfEvolutionPlan make_plan(const KdnfExperiment& cfg, int n, std::uint64_t seed) {
  DnfEvolutionPlan plan;
  plan.k = cfg.target.k();
  plan.term_params = resolve_params(n, cfg.epsilon, conj_neighborhood_cap(n), cfg.overrides);
  plan.term_params.seed = seed;
  plan.aggregator = cfg.aggregator;
  plan.fitness = cfg.fitness;
  plan.q = cfg.overrides.q;
  plan.mode = cfg.overrides.mode;
  return plan;
}

int resolve_n(const KdnfExperiment& cfg) {
  const int n = cfg.n > 0 ? cfg.n : std::max(1, cfg.target.max_index());
  check_dimension(cfg.target, n);
  return n;
}

Json kdnf_params_json(const KdnfExperiment& cfg, int n) {
  return Json{{"target", cfg.target.to_string()},
              {"k", cfg.target.k()},
              {"n", n},
              {"epsilon", cfg.epsilon},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"fitness", to_string(cfg.fitness)},
              {"aggregator", to_string(cfg.aggregator)},
              {"overrides", overrides_json(cfg.overrides)},
              {"term_params", params_json(make_plan(cfg, n, 0).term_params)}};
}

std::vector<KdnfResult> run_kdnf_trials(const KdnfExperiment& cfg, int n) {
  return parallel_map<KdnfResult>(cfg.trials, worker_count(cfg.overrides.threads), [&](std::size_t i) {
    const DnfEvolutionPlan plan = make_plan(cfg, n, derive_seed(cfg.seed, {i, kEvolutionTag}));
    return evolve_kdnf(cfg.target, plan);
  });
}

// Index of the target clause with the largest exact correlation to c; ties go
// to the lowest index.
std::size_t best_target_clause(const MonotoneConjunction& c, const MonotoneDnf& target) {
  std::size_t best = 0;
  double best_value = -2.0;
  for (std::size_t i = 0; i < target.k(); ++i) {
    const double v = conj_perf_closed_form(c, target[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

// Same clause sizes as target, on disjoint consecutive variables.
std::optional<MonotoneDnf> disjoint_control(const MonotoneDnf& target, int n) {
  std::vector<MonotoneConjunction> clauses;
  int next = 1;
  for (const auto& c : target.clauses()) {
    MonotoneConjunction d;
    for (int i = 0; i < c.size(); ++i) {
      if (next > n) return std::nullopt;
      d = d.with(next++);
    }
    clauses.push_back(d);
  }
  return MonotoneDnf(clauses);
}

struct ConvergenceStats {
  Json trials = Json::array();
  double duplicate_frequency = 0.0;
  double mean_distinct_targets = 0.0;
  double exact_match_rate = 0.0;
  std::vector<std::uint64_t> evolved_literals;
  std::vector<std::uint64_t> target_literals;
};

ConvergenceStats convergence_stats(const MonotoneDnf& target, int n,
                                   const std::vector<KdnfResult>& results) {
  ConvergenceStats st;
  st.evolved_literals.assign(static_cast<std::size_t>(n), 0);
  st.target_literals.assign(static_cast<std::size_t>(n), 0);
  std::size_t duplicates = 0;
  std::size_t exact = 0;
  double distinct_sum = 0.0;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t];
    Json best = Json::array();
    std::vector<std::size_t> hits(target.k(), 0);
    for (const auto& clause : r.dnf.clauses()) {
      const std::size_t b = best_target_clause(clause, target);
      best.push_back(b);
      ++hits[b];
      if (clause == target[b]) ++exact;
      for (int v : clause.vars()) ++st.evolved_literals[static_cast<std::size_t>(v - 1)];
    }
    for (const auto& clause : target.clauses()) {
      for (int v : clause.vars()) ++st.target_literals[static_cast<std::size_t>(v - 1)];
    }
    const bool duplicate = std::any_of(hits.begin(), hits.end(), [](auto h) { return h > 1; });
    const auto distinct = std::count_if(hits.begin(), hits.end(), [](auto h) { return h > 0; });
    duplicates += duplicate ? 1 : 0;
    distinct_sum += static_cast<double>(distinct);
    st.trials.push_back(Json{{"trial", t},
                             {"result", r.dnf.to_string()},
                             {"best_target_clause", best},
                             {"duplicate_convergence", duplicate},
                             {"distinct_targets_hit", distinct},
                             {"gen_perf", gen_perf_json(r)}});
  }
  if (!results.empty()) {
    const auto count = static_cast<double>(results.size());
    st.duplicate_frequency = static_cast<double>(duplicates) / count;
    st.mean_distinct_targets = distinct_sum / count;
    st.exact_match_rate = static_cast<double>(exact) / (count * static_cast<double>(target.k()));
  }
  return st;
}

Json literal_histogram(const ConvergenceStats& st) {
  Json rows = Json::array();
  for (std::size_t v = 0; v < st.evolved_literals.size(); ++v) {
    rows.push_back(Json{{"var", "x" + std::to_string(v + 1)},
                        {"evolved", st.evolved_literals[v]},
                        {"target", st.target_literals[v]}});
  }
  return rows;
}

}  // namespace

GoldenCheck make_check(std::string label, double expected, double actual, double tolerance) {
  return GoldenCheck{std::move(label), expected, actual, tolerance,
                     std::abs(expected - actual) <= tolerance};
}

bool ExperimentReport::all_checks_pass() const {
  return std::all_of(golden_checks.begin(), golden_checks.end(),
                     [](const GoldenCheck& c) { return c.pass; });
}

EvolutionParams resolve_params(int n, double epsilon, std::size_t neigh_cap,
                               const EvolutionOverrides& overrides) {
  EvolutionParams p = default_params(n, epsilon, neigh_cap);
  if (overrides.t) p.t = *overrides.t;
  if (overrides.s) p.s = *overrides.s;
  if (overrides.g) p.g = *overrides.g;
  validate(p);
  return p;
}

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EVOFORGE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

MonotoneConjunction random_conjunction(int n, int size, std::uint64_t seed) {
  if (size < 0 || size > n) throw ParameterError("conjunction size must lie in [0..n]");
  std::vector<int> vars(static_cast<std::size_t>(n));
  std::iota(vars.begin(), vars.end(), 1);
  SplitMix64 rng(seed);
  MonotoneConjunction c;
  for (int i = 0; i < size; ++i) {
    const auto remaining = static_cast<std::uint64_t>(n - i);
    const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.next() % remaining);
    std::swap(vars[static_cast<std::size_t>(i)], vars[j]);
    c = c.with(vars[static_cast<std::size_t>(i)]);
  }
  return c;
}

MonotoneDnf counterexample_hypothesis() { return parse_dnf("x1 | x2 | x3"); }
MonotoneDnf counterexample_target() { return parse_dnf("x1&x4&x5 | x2&x4&x6 | x3&x7&x8"); }

bool has_shared_literal(const MonotoneDnf& target) {
  for (std::size_t i = 0; i < target.k(); ++i) {
    for (std::size_t j = i + 1; j < target.k(); ++j) {
      if (target[i].mask() & target[j].mask()) return true;
    }
  }
  return false;
}

// ---- counterexample

ExperimentReport run_counterexample() {
  constexpr int n = 8;
  const MonotoneDnf r = counterexample_hypothesis();
  const MonotoneDnf f = counterexample_target();

  const ExactPerf signed_global = exact_perf(r, f, n, OutputConvention::kSigned);
  const ExactPerf binary_global = exact_perf(r, f, n, OutputConvention::kBinary);
  const ExactPerf binary_self = exact_perf(f, f, n, OutputConvention::kBinary);
  const PerfMatrix m = term_perf_matrix(r, f, n, ExactMode{});

  ExperimentReport rep;
  rep.name = "counterexample";
  rep.params = Json{{"n", n}, {"hypothesis", r.to_string()}, {"target", f.to_string()}};

  Json gp = Json::object();
  for (auto agg : kAllAggregators) gp[std::string(to_string(agg))] = gen_perf(m, agg);
  auto fraction = [](const ExactPerf& p) {
    return std::to_string(p.numerator) + "/" + std::to_string(std::int64_t{1} << p.log2_denominator);
  };
  rep.aggregates = Json{{"signed_global_perf", signed_global.value()},
                        {"signed_global_perf_exact", fraction(signed_global)},
                        {"binary_global_perf", binary_global.value()},
                        {"binary_global_perf_exact", fraction(binary_global)},
                        {"binary_target_self_perf", binary_self.value()},
                        {"binary_target_self_perf_exact", fraction(binary_self)},
                        {"signed_global_success_eps_0_5", global_success(signed_global.value(), 0.5)},
                        {"gen_perf", gp}};
  rep.tables["perf_matrix"] = matrix_json(m);

  rep.golden_checks.push_back(make_check("binary_global_perf", 81.0 / 256.0, binary_global.value()));
  rep.golden_checks.push_back(
      make_check("binary_global_equals_target_self", binary_self.value(), binary_global.value()));
  rep.golden_checks.push_back(make_check("signed_global_perf", -30.0 / 256.0, signed_global.value()));
  rep.golden_checks.push_back(make_check("gen_perf_min", 0.0, gen_perf(m, Aggregator::kMin)));
  rep.golden_checks.push_back(make_check("gen_perf_max", 0.25, gen_perf(m, Aggregator::kMax)));
  return rep;
}

// ---- monotone conjunctions

ExperimentReport run_conjunction_evolvability(const ConjunctionExperiment& cfg) {
  if (cfg.target) check_dimension(*cfg.target, cfg.n);
  if (!cfg.target && (cfg.target_size < 0 || cfg.target_size > cfg.n)) {
    throw ParameterError("target_size must lie in [0..n]");
  }
  const EvolutionParams base =
      resolve_params(cfg.n, cfg.epsilon, conj_neighborhood_cap(cfg.n), cfg.overrides);

  struct Trial {
    MonotoneConjunction target;
    ConjunctionTrace trace;
  };
  const auto results = parallel_map<Trial>(
      cfg.trials, worker_count(cfg.overrides.threads), [&](std::size_t i) {
        const MonotoneConjunction target =
            cfg.target ? *cfg.target
                       : random_conjunction(cfg.n, cfg.target_size, derive_seed(cfg.seed, {i, kTargetTag}));
        EvolutionParams p = base;
        p.seed = derive_seed(cfg.seed, {i, kEvolutionTag});
        return Trial{target, evolve_conjunction(target, p, {}, cfg.overrides.q, cfg.overrides.mode)};
      });

  ExperimentReport rep;
  rep.name = "conjunction";
  rep.params = Json{{"n", cfg.n},
                    {"target_size", cfg.target_size},
                    {"target", cfg.target ? Json(cfg.target->to_string()) : Json(nullptr)},
                    {"epsilon", cfg.epsilon},
                    {"trials", cfg.trials},
                    {"seed", cfg.seed},
                    {"overrides", overrides_json(cfg.overrides)},
                    {"evolution_params", params_json(base)}};

  std::size_t successes = 0;
  std::size_t over_budget = 0;
  std::vector<double> success_gens;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [target, trace] = results[i];
    rep.trials.push_back(conjunction_trial_json(i, target, trace));
    append_trace(rep.trace, i, trace);
    if (trace.succeeded) {
      ++successes;
      success_gens.push_back(*trace.success_gen);
    }
    if (trace.estimates > estimate_budget(trace.params)) ++over_budget;
  }
  rep.aggregates = Json{
      {"trials", results.size()},
      {"successes", successes},
      {"success_rate", results.empty() ? Json(nullptr)
                                       : Json(static_cast<double>(successes) /
                                              static_cast<double>(results.size()))},
      {"success_generation_quantiles", quantiles(success_gens)},
      {"over_budget_trials", over_budget}};
  rep.golden_checks.push_back(make_check("over_budget_trials", 0.0, static_cast<double>(over_budget)));
  return rep;
}

// ---- k-DNF

ExperimentReport run_kdnf_evolvability(const KdnfExperiment& cfg) {
  const int n = resolve_n(cfg);
  const auto results = run_kdnf_trials(cfg, n);
  const double bar = 1.0 - cfg.epsilon;

  ExperimentReport rep;
  rep.name = "kdnf";
  rep.params = kdnf_params_json(cfg, n);

  std::size_t headline_successes = 0;
  std::size_t over_budget = 0;
  std::size_t isolation_violations = 0;
  std::vector<double> total_gens;
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t];
    const std::uint64_t budget = r.term_evaluation_budget * r.traces.size();
    const bool within = r.total_evaluations <= budget;
    bool isolated = true;
    if (cfg.fitness == TermFitness::kIndexPaired) {
      for (std::size_t j = 0; j < r.clause_reads.size(); ++j) {
        for (std::size_t i = 0; i < r.clause_reads[j].size(); ++i) {
          if (i != j && r.clause_reads[j][i] != 0) isolated = false;
        }
      }
    }
    const double headline = r.gen_perf_of(cfg.aggregator);
    headline_successes += headline > bar ? 1 : 0;
    over_budget += within ? 0 : 1;
    isolation_violations += isolated ? 0 : 1;

    Json terms = Json::array();
    int gens = 0;
    for (std::size_t j = 0; j < r.traces.size(); ++j) {
      terms.push_back(conjunction_trial_json(j, cfg.target[j], r.traces[j]));
      gens += static_cast<int>(r.traces[j].records.size());
    }
    total_gens.push_back(gens);
    rep.trials.push_back(Json{{"trial", t},
                              {"result", r.dnf.to_string()},
                              {"global_perf", optional_json(r.global_perf)},
                              {"gen_perf", gen_perf_json(r)},
                              {"headline_success", headline > bar},
                              {"total_evaluations", r.total_evaluations},
                              {"evaluation_budget", budget},
                              {"within_budget", within},
                              {"clause_reads", r.clause_reads},
                              {"perf_matrix", matrix_json(r.matrix)},
                              {"terms", terms}});
    append_kdnf_trace(rep.trace, t, r, MonotoneConjunction{});
  }
  rep.aggregates = Json{
      {"trials", results.size()},
      {"headline_aggregator", to_string(cfg.aggregator)},
      {"headline_successes", headline_successes},
      {"headline_success_rate", results.empty() ? Json(nullptr)
                                                : Json(static_cast<double>(headline_successes) /
                                                       static_cast<double>(results.size()))},
      {"over_budget_trials", over_budget},
      {"isolation_violations", isolation_violations},
      {"total_generation_quantiles", quantiles(total_gens)}};
  rep.golden_checks.push_back(make_check("over_budget_trials", 0.0, static_cast<double>(over_budget)));
  if (cfg.fitness == TermFitness::kIndexPaired) {
    rep.golden_checks.push_back(
        make_check("isolation_violations", 0.0, static_cast<double>(isolation_violations)));
  }
  return rep;
}

ExperimentReport run_structural_vs_functional(const KdnfExperiment& cfg) {
  const int n = resolve_n(cfg);
  const auto results = run_kdnf_trials(cfg, n);
  const double bar = 1.0 - cfg.epsilon;

  ExperimentReport rep;
  rep.name = "structural_vs_functional";
  rep.params = kdnf_params_json(cfg, n);

  std::vector<double> global, mins, maxs, matched;
  std::size_t functional_only = 0;
  Json joint = Json::array();
  for (std::size_t t = 0; t < results.size(); ++t) {
    const auto& r = results[t];
    const double g = r.global_perf.value_or(std::nan(""));
    const double mn = r.gen_perf_of(Aggregator::kMin);
    const double mx = r.gen_perf_of(Aggregator::kMax);
    const double mm = r.gen_perf_of(Aggregator::kMatchedMin);
    global.push_back(g);
    mins.push_back(mn);
    maxs.push_back(mx);
    matched.push_back(mm);
    const bool functional = mx > bar;
    const bool structural = mm > bar;
    functional_only += (functional && !structural) ? 1 : 0;
    joint.push_back(Json::array({g, mn, mx, mm}));
    rep.trials.push_back(Json{{"trial", t},
                              {"result", r.dnf.to_string()},
                              {"global_perf", optional_json(r.global_perf)},
                              {"gen_perf", gen_perf_json(r)},
                              {"functional_success", functional},
                              {"structural_success", structural},
                              {"perf_matrix", matrix_json(r.matrix)}});
    append_kdnf_trace(rep.trace, t, r, MonotoneConjunction{});
  }
  rep.tables["joint_columns"] = Json::array({"global", "min", "max", "matched_min"});
  rep.tables["joint"] = joint;
  rep.aggregates = Json{{"trials", results.size()},
                        {"mean_global_perf", mean_of(global)},
                        {"mean_min", mean_of(mins)},
                        {"mean_max", mean_of(maxs)},
                        {"mean_matched_min", mean_of(matched)},
                        {"functional_without_structural", functional_only},
                        {"max_exceeds_min", mean_of(maxs) > mean_of(mins)}};
  return rep;
}

ExperimentReport run_redundancy_bias(const KdnfExperiment& cfg_in) {
  if (cfg_in.target.k() < 2 || !has_shared_literal(cfg_in.target)) {
    throw ParameterError("redundancy_bias needs a target with two clauses sharing a literal");
  }
  KdnfExperiment cfg = cfg_in;
  cfg.fitness = TermFitness::kAggregateAll;
  cfg.aggregator = Aggregator::kMax;
  const int n = resolve_n(cfg);

  ExperimentReport rep;
  rep.name = "redundancy_bias";
  rep.params = kdnf_params_json(cfg, n);
  rep.params["fitness_model"] = "best correlation against any target clause (model choice)";

  const auto results = run_kdnf_trials(cfg, n);
  const ConvergenceStats st = convergence_stats(cfg.target, n, results);
  rep.trials = st.trials;
  for (std::size_t t = 0; t < results.size(); ++t) {
    append_kdnf_trace(rep.trace, t, results[t], MonotoneConjunction{});
  }
  rep.tables["literal_histogram"] = literal_histogram(st);
  rep.aggregates = Json{{"trials", results.size()},
                        {"duplicate_convergence_frequency", st.duplicate_frequency},
                        {"mean_distinct_targets_hit", st.mean_distinct_targets},
                        {"exact_clause_match_rate", st.exact_match_rate}};

  if (const auto control = disjoint_control(cfg.target, n)) {
    KdnfExperiment ccfg = cfg;
    ccfg.target = *control;
    ccfg.n = n;
    const auto cres = run_kdnf_trials(ccfg, n);
    const ConvergenceStats cst = convergence_stats(*control, n, cres);
    rep.tables["control_literal_histogram"] = literal_histogram(cst);
    rep.aggregates["control"] = Json{{"target", control->to_string()},
                                     {"duplicate_convergence_frequency", cst.duplicate_frequency},
                                     {"mean_distinct_targets_hit", cst.mean_distinct_targets},
                                     {"exact_clause_match_rate", cst.exact_match_rate}};
  } else {
    rep.aggregates["control"] = nullptr;
  }
  return rep;
}

// ---- parity

ExperimentReport run_parity(const ParityExperiment& cfg) {
  if (cfg.parity_size < 3 || cfg.parity_size > cfg.n) {
    throw ParameterError("parity_size must lie in [3..n]");
  }
  std::vector<int> vars(static_cast<std::size_t>(cfg.parity_size));
  std::iota(vars.begin(), vars.end(), 1);
  const ParityFunction parity(vars);
  const EvolutionParams base =
      resolve_params(cfg.n, cfg.epsilon, conj_neighborhood_cap(cfg.n), cfg.overrides);
  const double bar = 1.0 - cfg.epsilon;

  ExperimentReport rep;
  rep.name = "parity";
  rep.params = Json{{"n", cfg.n},
                    {"parity", parity.to_string()},
                    {"parity_size", cfg.parity_size},
                    {"epsilon", cfg.epsilon},
                    {"trials", cfg.trials},
                    {"seed", cfg.seed},
                    {"overrides", overrides_json(cfg.overrides)},
                    {"evolution_params", params_json(base)}};

  // Correlation of every conjunction of size <= 3 with the parity.
  Json landscape = Json::array();
  double max_abs = 0.0;
  std::vector<MonotoneConjunction> small{MonotoneConjunction{}};
  for (int a = 1; a <= cfg.n; ++a) {
    small.push_back({a});
    for (int b = a + 1; b <= cfg.n; ++b) {
      small.push_back({a, b});
      for (int c = b + 1; c <= cfg.n; ++c) small.push_back({a, b, c});
    }
  }
  if (cfg.n <= kMaxExactDimension) {
    for (const auto& c : small) {
      const double v = exact_perf(c, parity, cfg.n).value();
      max_abs = std::max(max_abs, std::abs(v));
      landscape.push_back(Json{{"conjunction", c.to_string()}, {"exact_perf", v}});
    }
    rep.tables["landscape"] = landscape;
  }

  const auto traces = parallel_map<ConjunctionTrace>(
      cfg.trials, worker_count(cfg.overrides.threads), [&](std::size_t i) {
        EvolutionParams p = base;
        p.seed = derive_seed(cfg.seed, {i, kEvolutionTag});
        const ConjunctionClass cls(cfg.n, cfg.overrides.q);
        CorrelationOracle oracle(parity, cfg.n, p.s, cfg.overrides.mode);
        return evolve(MonotoneConjunction{}, cls, oracle, p);
      });

  std::size_t above = 0;
  std::size_t successes = 0;
  double max_emp = -1.0;
  double max_exact = -1.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& tr = traces[i];
    double trial_max = tr.initial_emp_perf;
    double trial_exact = tr.initial_exact_perf.value_or(-1.0);
    for (const auto& rec : tr.records) {
      trial_max = std::max(trial_max, rec.emp_perf);
      if (rec.exact_perf) trial_exact = std::max(trial_exact, *rec.exact_perf);
    }
    above += (trial_max > bar || trial_exact > bar || tr.succeeded) ? 1 : 0;
    successes += tr.succeeded ? 1 : 0;
    max_emp = std::max(max_emp, trial_max);
    max_exact = std::max(max_exact, trial_exact);
    Json j = conjunction_trial_json(i, MonotoneConjunction{}, tr);
    j["target"] = parity.to_string();
    j["max_emp_perf"] = trial_max;
    j["max_exact_perf"] = trial_exact;
    rep.trials.push_back(j);
    append_trace(rep.trace, i, tr);
  }
  rep.aggregates = Json{{"trials", traces.size()},
                        {"successes", successes},
                        {"trials_above_threshold", above},
                        {"threshold", bar},
                        {"max_emp_perf", traces.empty() ? Json(nullptr) : Json(max_emp)},
                        {"max_exact_perf", traces.empty() ? Json(nullptr) : Json(max_exact)},
                        {"landscape_max_abs_perf",
                         cfg.n <= kMaxExactDimension ? Json(max_abs) : Json(nullptr)}};

  if (cfg.n <= kMaxExactDimension) {
    rep.golden_checks.push_back(make_check("landscape_max_abs_perf", 0.0, max_abs, 0.25));
  }
  rep.golden_checks.push_back(make_check("reference_conj_x1x2_vs_parity_x1x2", 0.5,
                                         exact_perf(MonotoneConjunction{1, 2}, ParityFunction{1, 2}, 2).value()));
  rep.golden_checks.push_back(make_check("reference_conj_x1_vs_parity_x1x2", 0.0,
                                         exact_perf(MonotoneConjunction{1}, ParityFunction{1, 2}, 2).value()));
  rep.golden_checks.push_back(make_check("trials_above_threshold", 0.0, static_cast<double>(above)));
  return rep;
}

}  // namespace evoforge
