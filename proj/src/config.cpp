#include "evoforge/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "evoforge/report.hpp"

namespace evoforge {

namespace {

using Kind = ConfigError::Kind;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::string_view text, int line) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ConfigError(Kind::kSyntax, std::string(field), line,
                      "cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

struct Defaults {
  int n;
  double epsilon;
  std::size_t trials;
  const char* target;  // nullptr when the experiment takes none
};

const std::map<std::string, Defaults, std::less<>>& defaults_table() {
  static const std::map<std::string, Defaults, std::less<>> table = {
      {"counterexample", {8, 0.1, 0, nullptr}},
      {"conjunction", {10, 0.1, 50, nullptr}},
      {"kdnf", {8, 0.1, 50, "x1&x2 | x3&x4"}},
      {"structural_vs_functional", {8, 0.1, 50, "x1&x4&x5 | x2&x4&x6 | x3&x7&x8"}},
      {"parity", {10, 0.5, 50, nullptr}},
      {"redundancy_bias", {8, 0.1, 50, "x1&x2 | x1&x3"}},
  };
  return table;
}

const Defaults& defaults_for(const std::string& experiment) {
  const auto& table = defaults_table();
  const auto it = table.find(experiment);
  if (it == table.end()) {
    throw ConfigError(Kind::kValidation, "experiment", 0, "unknown experiment '" + experiment + "'");
  }
  return it->second;
}

bool takes_dnf_target(const std::string& e) {
  return e == "kdnf" || e == "structural_vs_functional" || e == "redundancy_bias";
}

// Fills every field that the experiment reads.
RunConfig resolved(const RunConfig& in) {
  RunConfig c = in;
  const Defaults& d = defaults_for(c.experiment);
  if (!c.epsilon) c.epsilon = d.epsilon;
  if (!c.trials) c.trials = d.trials;
  if (!c.target && d.target) c.target = d.target;
  int min_n = 1;
  if (c.target) min_n = std::max(1, parse_function(*c.target).max_index());
  if (!c.n) c.n = std::max(d.n, min_n);
  if (c.experiment == "conjunction" && !c.target && !c.target_size) c.target_size = 3;
  if (c.experiment == "parity" && !c.parity_size) c.parity_size = 4;
  if (takes_dnf_target(c.experiment)) {
    if (!c.k) c.k = static_cast<int>(parse_dnf(*c.target).k());
    if (!c.fitness) {
      c.fitness = c.experiment == "kdnf" ? TermFitness::kIndexPaired : TermFitness::kAggregateAll;
    }
    if (!c.aggregator) {
      c.aggregator = c.experiment == "kdnf" ? Aggregator::kMatchedMin : Aggregator::kMax;
    }
  }
  return c;
}

EvolutionOverrides overrides_of(const RunConfig& c) {
  EvolutionOverrides o;
  o.t = c.t;
  o.s = c.s;
  o.g = c.g;
  o.q = c.q;
  o.mode = c.mode;
  o.threads = c.threads;
  return o;
}

// Shortest text that parses back to v.
std::string short_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

ConfigError::ConfigError(Kind kind, std::string field, int line, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      kind_(kind),
      field_(std::move(field)),
      line_(line) {}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> list = {
      {"counterexample", "exact global and per-term performance of x1|x2|x3 against the three-clause target"},
      {"conjunction", "evolution of monotone conjunctions toward random targets"},
      {"kdnf", "term-wise k-DNF evolution with budget and oracle-isolation accounting"},
      {"structural_vs_functional", "joint distribution of global, min, max and matched-min measures"},
      {"parity", "conjunction evolution against a parity target, with the flat correlation landscape"},
      {"redundancy_bias", "duplicate convergence under best-against-any clause fitness"},
  };
  return list;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(Kind::kSyntax, "", line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(Kind::kSyntax, "", line_no, "missing key before '='");
    if (seen.count(key)) {
      throw ConfigError(Kind::kSyntax, key, line_no,
                        "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;

    try {
      if (key == "experiment") {
        cfg.experiment = std::string(value);
      } else if (key == "n") {
        cfg.n = parse_number<int>(key, value, line_no);
      } else if (key == "k") {
        cfg.k = parse_number<int>(key, value, line_no);
      } else if (key == "epsilon") {
        cfg.epsilon = parse_number<double>(key, value, line_no);
      } else if (key == "target") {
        (void)parse_function(value);
        cfg.target = std::string(value);
      } else if (key == "target_size") {
        cfg.target_size = parse_number<int>(key, value, line_no);
      } else if (key == "parity_size") {
        cfg.parity_size = parse_number<int>(key, value, line_no);
      } else if (key == "aggregator") {
        cfg.aggregator = parse_aggregator(value);
      } else if (key == "fitness") {
        cfg.fitness = parse_term_fitness(value);
      } else if (key == "t") {
        cfg.t = parse_number<double>(key, value, line_no);
      } else if (key == "s") {
        cfg.s = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "g") {
        cfg.g = parse_number<int>(key, value, line_no);
      } else if (key == "q") {
        cfg.q = parse_number<int>(key, value, line_no);
      } else if (key == "trials") {
        cfg.trials = parse_number<std::size_t>(key, value, line_no);
      } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "mode") {
        if (value == "exact") {
          cfg.mode = PerfMode::kExact;
        } else if (value == "empirical") {
          cfg.mode = PerfMode::kEmpirical;
        } else {
          throw ConfigError(Kind::kValidation, key, line_no, "mode must be exact or empirical");
        }
      } else if (key == "out") {
        cfg.out_dir = std::string(value);
      } else if (key == "formats") {
        cfg.write_json = cfg.write_csv = cfg.write_txt = false;
        std::string_view rest = value;
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          const auto item = trim(rest.substr(0, comma));
          if (item == "json") {
            cfg.write_json = true;
          } else if (item == "csv") {
            cfg.write_csv = true;
          } else if (item == "txt") {
            cfg.write_txt = true;
          } else {
            throw ConfigError(Kind::kValidation, key, line_no, "unknown format '" + std::string(item) + "'");
          }
          rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
      } else if (key == "threads") {
        cfg.threads = parse_number<unsigned>(key, value, line_no);
      } else {
        throw ConfigError(Kind::kSyntax, key, line_no, "unknown key");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const DimensionError& e) {
      throw ConfigError(Kind::kIndex, key, line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(Kind::kSyntax, key, line_no, e.what());
    }
  }
  if (cfg.experiment.empty()) {
    throw ConfigError(Kind::kValidation, "experiment", 0, "missing required key");
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& in) {
  const RunConfig c = resolved(in);
  const int n = *c.n;
  if (n < 1 || n > kMaxDimension) {
    throw ConfigError(Kind::kValidation, "n", 0, "must lie in [1..64]");
  }
  if (!(*c.epsilon > 0.0 && *c.epsilon < 1.0)) {
    throw ConfigError(Kind::kValidation, "epsilon", 0, "must lie in (0,1)");
  }
  if (c.t && !(*c.t > 0.0)) throw ConfigError(Kind::kValidation, "t", 0, "must be positive");
  if (c.s && *c.s < 1) throw ConfigError(Kind::kValidation, "s", 0, "must be at least 1");
  if (c.g && *c.g < 0) throw ConfigError(Kind::kValidation, "g", 0, "must be non-negative");
  if (c.q < 0) throw ConfigError(Kind::kValidation, "q", 0, "must be non-negative");
  if (c.mode == PerfMode::kExact && n > kMaxExactDimension) {
    throw ConfigError(Kind::kValidation, "mode", 0, "exact mode needs n <= 24");
  }
  if (c.target) {
    const BooleanFunction f = parse_function(*c.target);
    if (f.max_index() > n) {
      throw ConfigError(Kind::kIndex, "target", 0,
                        "references x" + std::to_string(f.max_index()) + " but n = " + std::to_string(n));
    }
    if (f.is_parity()) {
      throw ConfigError(Kind::kValidation, "target", 0, "use experiment = parity for parity targets");
    }
    if (c.experiment == "conjunction" && parse_dnf(*c.target).k() != 1) {
      throw ConfigError(Kind::kValidation, "target", 0, "the conjunction experiment takes a single clause");
    }
    if (c.experiment == "counterexample" || c.experiment == "parity") {
      throw ConfigError(Kind::kValidation, "target", 0, "not used by experiment " + c.experiment);
    }
  }
  if (takes_dnf_target(c.experiment)) {
    if (*c.k != static_cast<int>(parse_dnf(*c.target).k())) {
      throw ConfigError(Kind::kValidation, "k", 0, "does not match the target's clause count");
    }
    if (c.fitness == TermFitness::kAggregateAll && c.aggregator == Aggregator::kMatchedMin) {
      throw ConfigError(Kind::kValidation, "aggregator",
                        0, "matched_min cannot score a single clause under aggregate_all fitness");
    }
    if (c.experiment == "redundancy_bias" && !has_shared_literal(parse_dnf(*c.target))) {
      throw ConfigError(Kind::kValidation, "target", 0, "redundancy_bias needs clauses sharing a literal");
    }
  }
  if (c.target_size && (*c.target_size < 0 || *c.target_size > n)) {
    throw ConfigError(Kind::kIndex, "target_size", 0, "must lie in [0..n]");
  }
  if (c.parity_size && (*c.parity_size < 3 || *c.parity_size > n)) {
    throw ConfigError(Kind::kIndex, "parity_size", 0, "must lie in [3..n]");
  }
}

std::string format_config(const RunConfig& in) {
  const RunConfig c = resolved(in);
  std::ostringstream out;
  out << "experiment = " << c.experiment << '\n';
  out << "n = " << *c.n << '\n';
  if (c.k) out << "k = " << *c.k << '\n';
  out << "epsilon = " << short_double(*c.epsilon) << '\n';
  if (c.target) out << "target = " << parse_function(*c.target).to_string() << '\n';
  if (c.target_size) out << "target_size = " << *c.target_size << '\n';
  if (c.parity_size) out << "parity_size = " << *c.parity_size << '\n';
  if (c.aggregator) out << "aggregator = " << to_string(*c.aggregator) << '\n';
  if (c.fitness) out << "fitness = " << to_string(*c.fitness) << '\n';
  if (c.t) out << "t = " << short_double(*c.t) << '\n';
  if (c.s) out << "s = " << *c.s << '\n';
  if (c.g) out << "g = " << *c.g << '\n';
  if (c.q) out << "q = " << c.q << '\n';
  out << "trials = " << *c.trials << '\n';
  out << "seed = " << c.seed << '\n';
  out << "mode = " << (c.mode == PerfMode::kExact ? "exact" : "empirical") << '\n';
  return out.str();
}

ExperimentReport run_experiment(const RunConfig& in) {
  validate(in);
  const RunConfig c = resolved(in);
  ExperimentReport rep;
  if (c.experiment == "counterexample") {
    rep = run_counterexample();
  } else if (c.experiment == "conjunction") {
    ConjunctionExperiment e;
    e.n = *c.n;
    if (c.target) {
      e.target = parse_conjunction(*c.target);
      e.target_size = e.target->size();
    } else {
      e.target_size = *c.target_size;
    }
    e.epsilon = *c.epsilon;
    e.trials = *c.trials;
    e.seed = c.seed;
    e.overrides = overrides_of(c);
    rep = run_conjunction_evolvability(e);
  } else if (c.experiment == "parity") {
    ParityExperiment e;
    e.n = *c.n;
    e.parity_size = *c.parity_size;
    e.epsilon = *c.epsilon;
    e.trials = *c.trials;
    e.seed = c.seed;
    e.overrides = overrides_of(c);
    rep = run_parity(e);
  } else {
    KdnfExperiment e;
    e.target = parse_dnf(*c.target);
    e.n = *c.n;
    e.epsilon = *c.epsilon;
    e.trials = *c.trials;
    e.seed = c.seed;
    e.fitness = *c.fitness;
    e.aggregator = *c.aggregator;
    e.overrides = overrides_of(c);
    if (c.experiment == "kdnf") {
      rep = run_kdnf_evolvability(e);
    } else if (c.experiment == "structural_vs_functional") {
      rep = run_structural_vs_functional(e);
    } else {
      rep = run_redundancy_bias(e);
    }
  }
  rep.params["config"] = format_config(c);
  rep.params["master_seed"] = c.seed;
  return rep;
}

int run(const RunConfig& cfg, std::ostream& log) {
  ExperimentReport rep;
  try {
    rep = run_experiment(cfg);
  } catch (const ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    log << "configuration error: " << e.what() << '\n';
    return 2;
  }

  namespace fs = std::filesystem;
  try {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      log << "output error: cannot create directory '" << cfg.out_dir << "'\n";
      return 2;
    }
    if (cfg.write_json) write_file(dir / "report.json", report_to_json(rep).dump(2) + "\n");
    if (cfg.write_csv) {
      std::ostringstream csv;
      write_trace_csv(rep, csv);
      write_file(dir / "trace.csv", csv.str());
    }
    if (cfg.write_txt) {
      std::ostringstream txt;
      write_summary(rep, txt);
      write_file(dir / "summary.txt", txt.str());
    }
  } catch (const std::exception& e) {
    log << "output error: " << e.what() << '\n';
    return 2;
  }

  write_summary(rep, log);
  return rep.all_checks_pass() ? 0 : 1;
}

std::string perf_query(const PerfQuery& q) {
  const BooleanFunction r = parse_function(q.r);
  const BooleanFunction f = parse_function(q.f);
  check_dimension(r, q.n);
  check_dimension(f, q.n);
  std::ostringstream out;
  if (q.samples) {
    const double v = empirical_perf(r, f, q.n, SampleSpec{*q.samples, q.seed}, q.conv);
    out << "perf = " << format_double(v) << "  (mode=sampled, s=" << *q.samples << ", seed=" << q.seed
        << ", n=" << q.n << ", conv=" << to_string(q.conv) << ")";
  } else {
    const ExactPerf p = exact_perf(r, f, q.n, q.conv);
    out << "perf = " << format_double(p.value()) << "  (mode=exact, " << p.numerator << "/2^"
        << p.log2_denominator << ", n=" << q.n << ", conv=" << to_string(q.conv) << ")";
  }
  return out.str();
}

}  // namespace evoforge
