#include "evoforge/perf.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include "evoforge/rng.hpp"

namespace evoforge {

namespace {

void check_samples(const SampleSpec& spec) {
  if (spec.samples < 1) throw std::invalid_argument("sample count must be at least 1");
}

// Calls visit(words, lane_mask) for each 64-assignment block of the stream.
template <typename Visit>
void for_each_sample_block(int n, const SampleSpec& spec, Visit&& visit) {
  const CounterRng rng(spec.seed);
  std::array<std::uint64_t, kMaxDimension> words{};
  const std::uint64_t blocks = (spec.samples + 63) / 64;
  const auto width = static_cast<std::uint64_t>(n);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (int v = 0; v < n; ++v) words[v] = rng.word(b * width + static_cast<std::uint64_t>(v));
    const std::uint64_t remaining = spec.samples - b * 64;
    const std::uint64_t lanes = remaining >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << remaining) - 1;
    visit(SlicedWords(words.data(), static_cast<std::size_t>(n)), lanes);
  }
}

double finish(std::uint64_t count, std::uint64_t samples, OutputConvention conv) {
  const auto s = static_cast<double>(samples);
  if (conv == OutputConvention::kSigned) {
    return (s - 2.0 * static_cast<double>(count)) / s;
  }
  return static_cast<double>(count) / s;
}

std::uint64_t block_count(std::uint64_t rv, std::uint64_t fv, std::uint64_t lanes,
                          OutputConvention conv) noexcept {
  return static_cast<std::uint64_t>(
      std::popcount((conv == OutputConvention::kSigned ? (rv ^ fv) : (rv & fv)) & lanes));
}

void check_inputs(const BooleanFunction& f, int n, OutputConvention conv) {
  check_dimension(f, n);
  check_convention(f, conv);
}

// Kuhn's augmenting path on the graph {(i, j) : m(i, j) >= threshold}.
bool has_perfect_matching(const PerfMatrix& m, double threshold) {
  const std::size_t k = m.k();
  std::vector<int> match_of_col(k, -1);
  std::function<bool(std::size_t, std::vector<char>&)> augment =
      [&](std::size_t row, std::vector<char>& seen) {
        for (std::size_t col = 0; col < k; ++col) {
          if (m(row, col) < threshold || seen[col]) continue;
          seen[col] = 1;
          if (match_of_col[col] < 0 ||
              augment(static_cast<std::size_t>(match_of_col[col]), seen)) {
            match_of_col[col] = static_cast<int>(row);
            return true;
          }
        }
        return false;
      };
  for (std::size_t row = 0; row < k; ++row) {
    std::vector<char> seen(k, 0);
    if (!augment(row, seen)) return false;
  }
  return true;
}

}  // namespace

double empirical_perf(const BooleanFunction& r, const BooleanFunction& f, int n,
                      const SampleSpec& spec, OutputConvention conv) {
  check_samples(spec);
  check_inputs(r, n, conv);
  check_inputs(f, n, conv);
  std::uint64_t count = 0;
  for_each_sample_block(n, spec, [&](SlicedWords words, std::uint64_t lanes) {
    count += block_count(r.eval_sliced(words), f.eval_sliced(words), lanes, conv);
  });
  return finish(count, spec.samples, conv);
}

std::vector<double> empirical_perf_many(const BooleanFunction& r,
                                        std::span<const BooleanFunction> targets, int n,
                                        const SampleSpec& spec, OutputConvention conv) {
  check_samples(spec);
  check_inputs(r, n, conv);
  for (const auto& f : targets) check_inputs(f, n, conv);
  std::vector<std::uint64_t> counts(targets.size(), 0);
  for_each_sample_block(n, spec, [&](SlicedWords words, std::uint64_t lanes) {
    const std::uint64_t rv = r.eval_sliced(words);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      counts[i] += block_count(rv, targets[i].eval_sliced(words), lanes, conv);
    }
  });
  std::vector<double> out;
  out.reserve(targets.size());
  for (auto c : counts) out.push_back(finish(c, spec.samples, conv));
  return out;
}

double hoeffding_radius(std::uint64_t samples, double delta) {
  if (samples < 1 || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("hoeffding_radius needs s >= 1 and delta in (0,1)");
  }
  return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(samples));
}

PerfMatrix::PerfMatrix(std::size_t k, OutputConvention conv)
    : k_(k), conv_(conv), entries_(k * k, 0.0) {
  if (k == 0) throw std::invalid_argument("a performance matrix needs k >= 1");
}

std::string_view to_string(Aggregator agg) {
  switch (agg) {
    case Aggregator::kMin: return "min";
    case Aggregator::kMax: return "max";
    case Aggregator::kMean: return "mean";
    case Aggregator::kMedian: return "median";
    case Aggregator::kMatchedMin: return "matched_min";
  }
  return "?";
}

Aggregator parse_aggregator(std::string_view text) {
  for (Aggregator agg : kAllAggregators) {
    if (to_string(agg) == text) return agg;
  }
  throw ParseError("unknown aggregator '" + std::string(text) + "'");
}

PerfMatrix term_perf_matrix(const MonotoneDnf& r, const MonotoneDnf& f, int n,
                            const MatrixMode& mode, OutputConvention conv) {
  if (r.k() != f.k()) {
    throw KMismatchError("hypothesis has " + std::to_string(r.k()) + " clauses, target has " +
                         std::to_string(f.k()));
  }
  check_dimension(r, n);
  check_dimension(f, n);
  const std::size_t k = f.k();
  PerfMatrix m(k, conv);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& target = f[i];
      const auto& hyp = r[j];
      if (std::holds_alternative<ExactMode>(mode)) {
        m(i, j) = conv == OutputConvention::kSigned
                      ? conj_perf_closed_form(hyp, target)
                      : std::ldexp(1.0, -std::popcount(hyp.mask() | target.mask()));
      } else {
        SampleSpec entry = std::get<SampleSpec>(mode);
        entry.seed ^= mix64((static_cast<std::uint64_t>(i) << 32) | j);
        m(i, j) = empirical_perf(hyp, target, n, entry, conv);
      }
    }
  }
  return m;
}

double aggregate(std::span<const double> values, Aggregator agg) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty list");
  switch (agg) {
    case Aggregator::kMin: return *std::min_element(values.begin(), values.end());
    case Aggregator::kMax: return *std::max_element(values.begin(), values.end());
    case Aggregator::kMean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    case Aggregator::kMedian: {
      std::vector<double> sorted(values.begin(), values.end());
      const std::size_t lower = (sorted.size() - 1) / 2;
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(lower),
                       sorted.end());
      return sorted[lower];
    }
    case Aggregator::kMatchedMin: break;
  }
  throw std::invalid_argument("matched_min needs a square matrix, not a value list");
}

double bottleneck_assignment(const PerfMatrix& m) {
  std::vector<double> levels(m.entries().begin(), m.entries().end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // Feasibility is monotone in the threshold; the smallest level is always feasible.
  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (has_perfect_matching(m, levels[mid])) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return levels[lo];
}

double gen_perf(const PerfMatrix& m, Aggregator agg) {
  if (agg == Aggregator::kMatchedMin) return bottleneck_assignment(m);
  return aggregate(m.entries(), agg);
}

bool global_success(double perf_value, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  return perf_value > 1.0 - epsilon;
}

}  // namespace evoforge
