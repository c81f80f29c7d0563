#include "evoforge/oracle.hpp"

namespace evoforge {

CorrelationOracle::CorrelationOracle(BooleanFunction target, int n, std::uint64_t samples,
                                     PerfMode mode, OutputConvention conv)
    : target_(std::move(target)), n_(n), samples_(samples), mode_(mode), conv_(conv) {
  if (samples_ < 1) throw std::invalid_argument("oracle needs at least one sample per estimate");
  check_dimension(target_, n_);
  check_convention(target_, conv_);
  if (mode_ == PerfMode::kExact && n_ > kMaxExactDimension) {
    throw BudgetError("exact oracle mode needs n <= " + std::to_string(kMaxExactDimension));
  }
  counters_.per_target_queries.assign(1, 0);
}

double CorrelationOracle::estimate(const BooleanFunction& candidate, std::uint64_t seed) {
  ++counters_.estimates;
  ++counters_.per_target_queries[0];
  if (mode_ == PerfMode::kExact) return exact_perf(candidate, target_, n_, conv_).value();
  counters_.evaluations += samples_;
  return empirical_perf(candidate, target_, n_, SampleSpec{samples_, seed}, conv_);
}

std::optional<double> CorrelationOracle::exact(const BooleanFunction& candidate) const {
  if (n_ > kMaxExactDimension) return std::nullopt;
  return exact_perf(candidate, target_, n_, conv_).value();
}

ClauseOracle::ClauseOracle(const MonotoneDnf& target, std::vector<std::size_t> subset,
                           Aggregator agg, int n, std::uint64_t samples, PerfMode mode)
    : target_(target), subset_(std::move(subset)), agg_(agg), n_(n), samples_(samples), mode_(mode) {
  if (samples_ < 1) throw std::invalid_argument("oracle needs at least one sample per estimate");
  if (subset_.empty()) throw std::invalid_argument("oracle needs at least one target clause");
  if (agg_ == Aggregator::kMatchedMin) {
    throw std::invalid_argument("matched_min does not aggregate a single clause's correlations");
  }
  for (auto i : subset_) {
    if (i >= target_.k()) throw std::out_of_range("target clause index out of range");
  }
  if (mode_ == PerfMode::kExact && n_ > kMaxExactDimension) {
    throw BudgetError("exact oracle mode needs n <= " + std::to_string(kMaxExactDimension));
  }
  check_dimension(target_, n_);
  counters_.per_target_queries.assign(target_.k(), 0);
}

double ClauseOracle::estimate(const BooleanFunction& candidate, std::uint64_t seed) {
  ++counters_.estimates;
  if (mode_ == PerfMode::kExact) return *exact(candidate);
  std::vector<BooleanFunction> clauses;
  clauses.reserve(subset_.size());
  for (auto i : subset_) {
    ++counters_.per_target_queries[i];
    clauses.emplace_back(target_[i]);
  }
  counters_.evaluations += samples_ * subset_.size();
  const auto values = empirical_perf_many(candidate, clauses, n_, SampleSpec{samples_, seed});
  return aggregate(values, agg_);
}

std::optional<double> ClauseOracle::exact(const BooleanFunction& candidate) const {
  if (n_ > kMaxExactDimension) return std::nullopt;
  std::vector<double> values;
  values.reserve(subset_.size());
  for (auto i : subset_) {
    ++counters_.per_target_queries[i];
    values.push_back(exact_perf(candidate, target_[i], n_).value());
  }
  return aggregate(values, agg_);
}

}  // namespace evoforge
