// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "evoforge/bool_core.hpp"
#include "evoforge/config.hpp"
#include "evoforge/experiments.hpp"
#include "evoforge/perf.hpp"
#include "evoforge/representations.hpp"

using namespace evoforge;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double limit_s,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (limit_s > 0.0) {
    std::snprintf(timing, sizeof timing, "%.2fs (limit %.0fs)", secs, limit_s);
  } else {
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
  }
  std::cout << '[' << (pass ? "PASS" : "FAIL") << "] " << id << ' ' << title << ": " << o.detail
            << (in_time ? "" : " [over time limit]") << "; " << timing << std::endl;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::mt19937_64 rng(7031);

MonotoneConjunction random_clause(int n, int max_size) {
  std::uniform_int_distribution<int> size_dist(1, max_size);
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[std::size_t(i)] = i + 1;
  std::shuffle(pool.begin(), pool.end(), rng);
  const int size = std::min(size_dist(rng), n);
  return MonotoneConjunction(std::vector<int>(pool.begin(), pool.begin() + size));
}

}  // namespace

int main() {
  const MonotoneDnf hyp = counterexample_hypothesis();
  const MonotoneDnf target = counterexample_target();

  criterion("AC1", "counterexample exact values", 1.0, [&] {
    const ExactPerf bin = exact_perf(hyp, target, 8, OutputConvention::kBinary);
    const ExactPerf self = exact_perf(target, target, 8, OutputConvention::kBinary);
    const ExactPerf sig = exact_perf(hyp, target, 8, OutputConvention::kSigned);
    const PerfMatrix m = term_perf_matrix(hyp, target, 8, ExactMode{});
    const bool ok = bin == ExactPerf{81, 8} && bin == self && sig == ExactPerf{-30, 8} &&
                    gen_perf(m, Aggregator::kMin) == 0.0 && gen_perf(m, Aggregator::kMax) == 0.25;
    return Outcome{ok, "binary " + std::to_string(bin.numerator) + "/256, self " +
                           std::to_string(self.numerator) + "/256, signed " +
                           std::to_string(sig.numerator) + "/256, min " +
                           fmt("%g, max %g", gen_perf(m, Aggregator::kMin),
                               gen_perf(m, Aggregator::kMax))};
  });

  criterion("AC2", "closed form vs enumeration", 5.0, [&] {
    double worst = 0.0;
    int pairs = 0;
    for (int i = 0; i < 400; ++i) {
      const int n = 4 + i % 9;
      const auto a = random_clause(n, 4);
      const auto b = random_clause(n, 4);
      worst = std::max(worst, std::abs(conj_perf_closed_form(a, b) - exact_perf(a, b, n).value()));
      ++pairs;
    }
    const bool worked = conj_perf_closed_form({1}, {1}) == 1.0 && conj_perf_closed_form({1}, {2}) == 0.0 &&
                        conj_perf_closed_form({1, 2}, {1, 2, 3}) == 0.75;
    return Outcome{worst <= 1e-12 && worked && pairs >= 200,
                   fmt("%g random pairs, max deviation %g, worked examples ", pairs, worst) +
                       (worked ? "ok" : "wrong")};
  });

  criterion("AC3", "empirical concentration", 30.0, [&] {
    const std::uint64_t s = 10000;
    const double exact = exact_perf(hyp, target, 8).value();
    const double radius = std::sqrt(2.0 * std::log(200.0) / double(s));
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const double v = empirical_perf(hyp, target, 8, SampleSpec{s, seed});
      inside += std::abs(v - exact) <= radius ? 1 : 0;
    }
    return Outcome{inside >= 990, fmt("%g/1000 within %.6f of the exact value", inside, radius)};
  });

  criterion("AC4", "conjunction evolvability", 120.0, [&] {
    ConjunctionExperiment cfg;
    cfg.n = 10;
    cfg.target_size = 3;
    cfg.epsilon = 0.1;
    cfg.trials = 50;
    cfg.seed = 2024;
    const auto rep = run_conjunction_evolvability(cfg);
    const int g = rep.params["evolution_params"]["g"].get<int>();
    const double rate = rep.aggregates["success_rate"].get<double>();
    return Outcome{rate >= 0.90 && g == 1200 && rep.all_checks_pass(),
                   fmt("success rate %.2f (need >= 0.90), g = %g", rate, g)};
  });

  criterion("AC5", "k-DNF term-wise evolvability", 240.0, [&] {
    KdnfExperiment cfg;
    cfg.target = MonotoneDnf{MonotoneConjunction{1, 2}, MonotoneConjunction{3, 4}};
    cfg.n = 8;
    cfg.epsilon = 0.1;
    cfg.trials = 50;
    cfg.seed = 2024;
    cfg.fitness = TermFitness::kIndexPaired;
    cfg.aggregator = Aggregator::kMatchedMin;
    const auto rep = run_kdnf_evolvability(cfg);
    const EvolutionParams term = default_params(8, 0.1, conj_neighborhood_cap(8));
    const std::uint64_t term_budget = estimate_budget(term) * term.s;
    int reached = 0;
    int within = 0;
    for (const auto& t : rep.trials) {
      reached += t["gen_perf"]["matched_min"].get<double>() > 0.9 ? 1 : 0;
      within += t["total_evaluations"].get<std::uint64_t>() <= 2 * term_budget ? 1 : 0;
    }
    const int trials = int(rep.trials.size());
    return Outcome{trials == 50 && reached >= 40 && within == trials && rep.all_checks_pass(),
                   fmt("%g/50 with matched_min > 0.9 (need >= 40), %g/50 within k x term budget", reached,
                       within)};
  });

  criterion("AC6", "structural vs functional divergence", 240.0, [&] {
    KdnfExperiment cfg;
    cfg.target = target;
    cfg.n = 8;
    cfg.epsilon = 0.1;
    cfg.trials = 50;
    cfg.seed = 2024;
    cfg.fitness = TermFitness::kAggregateAll;
    cfg.aggregator = Aggregator::kMax;
    const auto rep = run_structural_vs_functional(cfg);
    double sum_min = 0.0, sum_max = 0.0;
    for (const auto& row : rep.tables["joint"]) {
      sum_min += row[1].get<double>();
      sum_max += row[2].get<double>();
    }
    const auto rows = rep.tables["joint"].size();
    const double mean_min = sum_min / double(rows);
    const double mean_max = sum_max / double(rows);
    return Outcome{rows == 50 && mean_max > mean_min,
                   fmt("mean max %.4f vs mean min %.4f over %g trials", mean_max, mean_min, double(rows))};
  });

  criterion("AC7", "parity failure", 120.0, [&] {
    ParityExperiment cfg;
    cfg.n = 10;
    cfg.parity_size = 4;
    cfg.epsilon = 0.5;
    cfg.trials = 50;
    cfg.seed = 2024;
    const auto rep = run_parity(cfg);
    int above = 0;
    for (const auto& t : rep.trials) {
      const bool hit = t["max_emp_perf"].get<double>() > 0.5 || t["max_exact_perf"].get<double>() > 0.5;
      above += hit ? 1 : 0;
    }
    // Recompute the landscape directly rather than trusting the table.
    const ParityFunction parity{1, 2, 3, 4};
    double flat = 0.0;
    std::size_t count = 0;
    for (std::uint64_t m = 0; m < (1u << 10); ++m) {
      if (std::popcount(m) > 3) continue;
      flat = std::max(flat, std::abs(exact_perf(MonotoneConjunction::from_mask(m), parity, 10).value()));
      ++count;
    }
    const bool table_ok = rep.tables["landscape"].size() == count;
    return Outcome{above == 0 && flat <= 0.25 && table_ok && rep.trials.size() == 50,
                   fmt("%g/50 trials above 0.5, landscape max |perf| %g over %g conjunctions", above, flat,
                       double(count))};
  });

  criterion("AC8", "byte-identical reruns", 0.0, [&] {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "evoforge_acceptance";
    fs::remove_all(root);
    const char* configs[] = {
        "experiment = counterexample\n",
        "experiment = conjunction\ntrials = 5\nseed = 8\n",
        "experiment = kdnf\ntrials = 5\nseed = 8\n",
        "experiment = parity\ntrials = 2\ng = 30\nseed = 8\n",
        "experiment = redundancy_bias\ntrials = 3\nseed = 8\n",
    };
    int identical = 0;
    int total = 0;
    std::ostringstream sink;
    for (const char* text : configs) {
      RunConfig cfg = parse_config(text);
      std::string files[2][2];
      for (int rep = 0; rep < 2; ++rep) {
        cfg.out_dir = (root / (cfg.experiment + std::to_string(rep))).string();
        if (run(cfg, sink) != 0) return Outcome{false, cfg.experiment + " run failed"};
        files[rep][0] = slurp(fs::path(cfg.out_dir) / "report.json");
        files[rep][1] = slurp(fs::path(cfg.out_dir) / "trace.csv");
      }
      ++total;
      identical += (files[0][0] == files[1][0] && files[0][1] == files[1][1] && !files[0][0].empty()) ? 1 : 0;
    }
    fs::remove_all(root);
    return Outcome{identical == total, fmt("%g/%g experiments reproduced byte for byte", identical, total)};
  });

  std::cout << (failures == 0 ? "all acceptance criteria passed" : "acceptance failures: " + std::to_string(failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
