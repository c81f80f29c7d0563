#include "evoforge/evo_engine.hpp"

#include <cmath>
#include <limits>

namespace evoforge {

namespace {

// ceil() that ignores floating-point fuzz just above an integer, so that
// 12*10/0.1 gives 1200 rather than 1201.
double ceil_tolerant(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return nearest;
  return std::ceil(x);
}

}  // namespace

EvolutionParams default_params(int n, double epsilon, std::size_t neigh_cap) {
  if (n < 1 || n > kMaxDimension) throw ParameterError("n must lie in [1..64]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
  if (neigh_cap < 1) throw ParameterError("neighborhood cap must be at least 1");
  EvolutionParams p;
  p.n = n;
  p.epsilon = epsilon;
  p.t = epsilon / 8.0;
  p.g = static_cast<int>(ceil_tolerant(12.0 * n / epsilon));
  p.neigh_cap = neigh_cap;
  const double union_terms = 4.0 * p.g * static_cast<double>(neigh_cap) / 0.05;
  p.s = static_cast<std::uint64_t>(ceil_tolerant(8.0 / (p.t * p.t) * std::log(union_terms)));
  p.seed = 0;
  return p;
}

void validate(const EvolutionParams& p) {
  if (p.n < 1 || p.n > kMaxDimension) throw ParameterError("n must lie in [1..64]");
  if (!(p.epsilon > 0.0 && p.epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
  if (!(p.t > 0.0)) throw ParameterError("tolerance t must be positive");
  if (p.s < 1) throw ParameterError("samples per estimate s must be at least 1");
  if (p.g < 0) throw ParameterError("generation budget g must be non-negative");
  if (p.neigh_cap < 1) throw ParameterError("neighborhood cap must be at least 1");
}

std::uint64_t estimate_budget(const EvolutionParams& p) {
  return static_cast<std::uint64_t>(p.g) * (p.neigh_cap + 1) + 2;
}

std::string_view to_string(Choice c) {
  return c == Choice::kBeneficial ? "beneficial" : "neutral";
}

Classification classify_neighborhood(double current_perf, std::span<const double> neighbor_perfs,
                                     double t) {
  if (!(t > 0.0)) throw ParameterError("tolerance t must be positive");
  Classification out;
  for (std::size_t j = 0; j < neighbor_perfs.size(); ++j) {
    const double p = neighbor_perfs[j];
    if (p >= current_perf + t) {
      out.beneficial.push_back(j);
    } else if (std::abs(p - current_perf) < t) {
      out.neutral.push_back(j);
    }
  }
  return out;
}

}  // namespace evoforge
