#include "evoforge/evo_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "evoforge/representations.hpp"

using namespace evoforge;

namespace {

// Representations are small integers; each maps to a distinct conjunction so
// that a lookup oracle can recover the id from the function.
struct ToyClass {
  using Representation = int;

  std::map<int, std::vector<int>> hoods;
  std::map<int, std::vector<double>> weights;

  BooleanFunction function(int r) const { return MonotoneConjunction::from_mask(std::uint64_t(r)); }
  std::vector<int> neighborhood(int r, double) const { return hoods.at(r); }
  std::vector<double> mutation_weights(int r, const std::vector<int>& hood) const {
    if (auto it = weights.find(r); it != weights.end()) return it->second;
    return std::vector<double>(hood.size(), 1.0 / double(hood.size()));
  }
  std::string describe(int r) const { return std::to_string(r); }
};
static_assert(RepresentationClass<ToyClass>);

class TableOracle final : public PerformanceOracle {
 public:
  explicit TableOracle(std::map<int, double> table) : table_(std::move(table)) {}

  double estimate(const BooleanFunction& c, std::uint64_t) override {
    ++counters_.estimates;
    return lookup(c);
  }
  std::optional<double> exact(const BooleanFunction& c) const override { return lookup(c); }
  std::uint64_t samples() const noexcept override { return 1; }
  std::size_t targets_per_estimate() const noexcept override { return 1; }
  const OracleCounters& counters() const noexcept override { return counters_; }

 private:
  double lookup(const BooleanFunction& c) const {
    const auto& conj = std::get<MonotoneConjunction>(c.variant());
    return table_.at(int(conj.mask()));
  }
  std::map<int, double> table_;
  OracleCounters counters_;
};

EvolutionParams toy_params(double t = 0.125) {
  EvolutionParams p;
  p.n = 8;
  p.epsilon = 0.1;
  p.t = t;
  p.s = 1;
  p.g = 10;
  p.neigh_cap = 8;
  return p;
}

}  // namespace

TEST(Classify, SplitsIntoBeneficialNeutralAndDropped) {
  const std::vector<double> perfs = {0.5, 0.625, 0.75, 0.4375, 0.25, 0.375};
  const auto cl = classify_neighborhood(0.5, perfs, 0.125);
  EXPECT_EQ(cl.beneficial, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(cl.neutral, (std::vector<std::size_t>{0, 3}));
}

TEST(Classify, BoundaryIsBeneficialAtPlusTAndDroppedAtMinusT) {
  const std::vector<double> perfs = {0.75, 0.25};
  const auto cl = classify_neighborhood(0.5, perfs, 0.25);
  EXPECT_EQ(cl.beneficial, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(cl.neutral.empty());
}

TEST(Classify, RejectsNonPositiveTolerance) {
  const std::vector<double> perfs = {0.0};
  EXPECT_THROW(classify_neighborhood(0.0, perfs, 0.0), ParameterError);
}

TEST(Step, SingleBeneficialNeighborIsAlwaysChosen) {
  ToyClass cls;
  cls.hoods[1] = {1, 2, 3};
  TableOracle oracle({{1, 0.0}, {2, 0.5}, {3, 0.0625}});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto res = step(1, cls, oracle, toy_params(), seed);
    EXPECT_EQ(res.next, 2);
    EXPECT_EQ(res.record.chose, Choice::kBeneficial);
    EXPECT_EQ(res.record.n_beneficial, 1u);
    EXPECT_EQ(res.record.n_neutral, 2u);
  }
}

TEST(Step, FallsBackToNeutralWhenNothingImproves) {
  ToyClass cls;
  cls.hoods[1] = {1, 2};
  TableOracle oracle({{1, 0.5}, {2, -0.5}});
  auto res = step(1, cls, oracle, toy_params(), 7);
  EXPECT_EQ(res.next, 1);
  EXPECT_EQ(res.record.chose, Choice::kNeutral);
  EXPECT_EQ(res.record.n_neutral, 1u);
  EXPECT_DOUBLE_EQ(res.record.emp_perf, 0.5);
}

TEST(Step, SelectionFollowsMutationWeightsWithinBeneficialSet) {
  ToyClass cls;
  cls.hoods[1] = {1, 2, 3};
  cls.weights[1] = {0.2, 0.6, 0.2};
  TableOracle oracle({{1, 0.0}, {2, 0.5}, {3, 0.5}});
  const int steps = 10000;
  int picked2 = 0;
  for (int i = 0; i < steps; ++i) {
    if (step(1, cls, oracle, toy_params(), derive_seed(99, {std::uint64_t(i)})).next == 2) ++picked2;
  }
  EXPECT_NEAR(picked2 / double(steps), 0.75, 0.03);
}

TEST(Step, ContractViolations) {
  TableOracle oracle({{1, 0.0}, {2, 0.0}, {3, 0.0}});
  ToyClass no_self;
  no_self.hoods[1] = {2, 3};
  EXPECT_THROW(step(1, no_self, oracle, toy_params(), 0), ContractError);

  ToyClass too_big;
  too_big.hoods[1] = {1, 2, 3};
  auto p = toy_params();
  p.neigh_cap = 2;
  EXPECT_THROW(step(1, too_big, oracle, p, 0), ContractError);

  ToyClass bad_weights;
  bad_weights.hoods[1] = {1, 2, 3};
  bad_weights.weights[1] = {0.5, 0.5, 0.5};
  EXPECT_THROW(step(1, bad_weights, oracle, toy_params(), 0), ContractError);
  bad_weights.weights[1] = {1.0, 0.0, 0.0};
  EXPECT_THROW(step(1, bad_weights, oracle, toy_params(), 0), ContractError);
  bad_weights.weights[1] = {0.5, 0.5};
  EXPECT_THROW(step(1, bad_weights, oracle, toy_params(), 0), ContractError);
}

TEST(DefaultParams, WorkedExample) {
  const auto p = default_params(10, 0.1, 101);
  EXPECT_DOUBLE_EQ(p.t, 0.0125);
  EXPECT_EQ(p.g, 1200);
  const double s = std::ceil(8.0 / (0.0125 * 0.0125) * std::log(4.0 * 1200 * 101 / 0.05));
  EXPECT_EQ(p.s, static_cast<std::uint64_t>(s));
  EXPECT_EQ(p.neigh_cap, 101u);
}

TEST(DefaultParams, RejectsDegenerateInputs) {
  EXPECT_THROW(default_params(10, 0.0, 10), ParameterError);
  EXPECT_THROW(default_params(10, 1.0, 10), ParameterError);
  EXPECT_THROW(default_params(0, 0.1, 10), ParameterError);
  auto p = default_params(4, 0.5, 10);
  p.t = 0.0;
  EXPECT_THROW(validate(p), ParameterError);
  p = default_params(4, 0.5, 10);
  p.g = -1;
  EXPECT_THROW(validate(p), ParameterError);
}

TEST(Evolve, ZeroGenerationsLeavesStartUntouched) {
  const MonotoneConjunction target{1, 2};
  auto p = default_params(6, 0.1, conj_neighborhood_cap(6));
  p.g = 0;
  const auto trace = evolve_conjunction(target, p, MonotoneConjunction{3});
  EXPECT_TRUE(trace.records.empty());
  EXPECT_FALSE(trace.succeeded);
  EXPECT_EQ(trace.final_repr(), (MonotoneConjunction{3}));
}

TEST(Evolve, StartingAtTargetSucceedsImmediately) {
  const MonotoneConjunction target{1, 3, 5};
  const auto p = default_params(6, 0.1, conj_neighborhood_cap(6));
  const auto trace = evolve_conjunction(target, p, target);
  ASSERT_TRUE(trace.succeeded);
  EXPECT_EQ(*trace.success_gen, 0);
  EXPECT_TRUE(trace.records.empty());
  EXPECT_EQ(trace.estimates, 2u);
}

TEST(Evolve, TargetOneMutationAwayIsReachedInOneGeneration) {
  const MonotoneConjunction target{1, 2};
  auto p = default_params(6, 0.1, conj_neighborhood_cap(6));
  p.s = 20000;
  const auto trace = evolve_conjunction(target, p, MonotoneConjunction{1});
  ASSERT_TRUE(trace.succeeded);
  EXPECT_EQ(*trace.success_gen, 1);
  EXPECT_EQ(trace.final_repr(), target);
}

TEST(Evolve, DeterministicForFixedSeed) {
  const MonotoneConjunction target{2, 4, 7};
  auto p = default_params(8, 0.2, conj_neighborhood_cap(8));
  p.s = 4000;
  p.seed = 1234;
  const auto a = evolve_conjunction(target, p);
  const auto b = evolve_conjunction(target, p);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].repr, b.records[i].repr);
    EXPECT_EQ(a.records[i].emp_perf, b.records[i].emp_perf);
  }
  EXPECT_EQ(a.succeeded, b.succeeded);
}

TEST(Evolve, ExactModeNeverLosesMoreThanTolerance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    std::vector<int> vars;
    for (int v = 1; v <= 8; ++v) {
      if (rng.uniform() < 0.4) vars.push_back(v);
    }
    const MonotoneConjunction target(vars);
    auto p = default_params(8, 0.1, conj_neighborhood_cap(8));
    p.seed = seed;
    const auto trace = evolve_conjunction(target, p, {}, 0, PerfMode::kExact);
    double prev = trace.initial_emp_perf;
    for (const auto& rec : trace.records) {
      EXPECT_GE(rec.emp_perf, prev - p.t);
      if (rec.chose == Choice::kBeneficial) EXPECT_GE(rec.emp_perf, prev + p.t);
      EXPECT_EQ(rec.emp_perf, *rec.exact_perf);
      prev = rec.emp_perf;
    }
    EXPECT_TRUE(trace.succeeded) << target.to_string();
  }
}

TEST(Evolve, SelectedSuccessorsAreNeverDeleterious) {
  const MonotoneConjunction target{1, 2, 3};
  auto p = default_params(8, 0.2, conj_neighborhood_cap(8));
  p.s = 3000;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    p.seed = seed;
    const auto trace = evolve_conjunction(target, p);
    for (const auto& rec : trace.records) {
      EXPECT_GE(rec.n_beneficial + rec.n_neutral, 1u);
      EXPECT_LE(rec.neighborhood_size, p.neigh_cap);
    }
  }
}

TEST(Evolve, EstimateAndEvaluationCountsStayWithinBudget) {
  const MonotoneConjunction target{1, 5, 6};
  auto p = default_params(8, 0.2, conj_neighborhood_cap(8));
  p.s = 2000;
  p.g = 30;
  const auto trace = evolve_conjunction(target, p);
  EXPECT_LE(trace.estimates, estimate_budget(p));
  EXPECT_EQ(trace.evaluations, trace.estimates * p.s);
  std::uint64_t expected = 2;
  for (const auto& rec : trace.records) {
    expected += rec.neighborhood_size + (rec.confirm_perf ? 1 : 0);
  }
  if (!trace.initial_confirm_perf) --expected;
  EXPECT_EQ(trace.estimates, expected);
}
