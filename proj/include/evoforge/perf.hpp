#pragma once

// Correlational performance: Monte-Carlo estimates, the per-term k x k matrix
// and its scalar aggregates.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "evoforge/bool_core.hpp"

namespace evoforge {

class KMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SampleSpec {
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
};

// (1/s) * sum_i r(x_i) f(x_i), x_i uniform on {0,1}^n. Assignments are drawn
// 64 at a time in bit-sliced form from a counter-based generator, so the value
// depends only on (r, f, n, spec, conv).
double empirical_perf(const BooleanFunction& r, const BooleanFunction& f, int n,
                      const SampleSpec& spec, OutputConvention conv = OutputConvention::kSigned);

// Same sample stream as empirical_perf, scored against several targets at
// once. out[i] == empirical_perf(r, targets[i], n, spec, conv).
std::vector<double> empirical_perf_many(const BooleanFunction& r,
                                        std::span<const BooleanFunction> targets, int n,
                                        const SampleSpec& spec,
                                        OutputConvention conv = OutputConvention::kSigned);

// Two-sided Hoeffding radius for a mean of s values in [-1, 1].
double hoeffding_radius(std::uint64_t samples, double delta);

// entries(i, j) = Perf_{f_i}(r_j): rows are target clauses, columns hypothesis
// clauses.
class PerfMatrix {
 public:
  PerfMatrix(std::size_t k, OutputConvention conv);

  std::size_t k() const noexcept { return k_; }
  OutputConvention convention() const noexcept { return conv_; }
  double operator()(std::size_t target, std::size_t hypothesis) const {
    return entries_.at(target * k_ + hypothesis);
  }
  double& operator()(std::size_t target, std::size_t hypothesis) {
    return entries_.at(target * k_ + hypothesis);
  }
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t k_;
  OutputConvention conv_;
  std::vector<double> entries_;
};

enum class Aggregator { kMin, kMax, kMean, kMedian, kMatchedMin };

inline constexpr Aggregator kAllAggregators[] = {Aggregator::kMin, Aggregator::kMax,
                                                 Aggregator::kMean, Aggregator::kMedian,
                                                 Aggregator::kMatchedMin};

std::string_view to_string(Aggregator agg);
Aggregator parse_aggregator(std::string_view text);

struct ExactMode {};
using MatrixMode = std::variant<ExactMode, SampleSpec>;

// Exact mode uses closed forms and does not depend on n beyond the dimension
// check; sampled mode gives entry (i, j) the seed spec.seed ^ mix64(i << 32 | j).
PerfMatrix term_perf_matrix(const MonotoneDnf& r, const MonotoneDnf& f, int n,
                            const MatrixMode& mode,
                            OutputConvention conv = OutputConvention::kSigned);

// Aggregate over the k^2 entries. kMedian takes the lower median. kMatchedMin
// is the bottleneck assignment value max_pi min_i m(i, pi(i)).
double gen_perf(const PerfMatrix& m, Aggregator agg);

// Aggregate over an arbitrary list of values (kMatchedMin not allowed).
double aggregate(std::span<const double> values, Aggregator agg);

// Best achievable min over a perfect matching of rows to columns.
double bottleneck_assignment(const PerfMatrix& m);

// perf_value > 1 - epsilon, with epsilon in (0, 1).
bool global_success(double perf_value, double epsilon);

}  // namespace evoforge
