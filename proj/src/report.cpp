#include "evoforge/report.hpp"

#include <cstdio>

namespace evoforge {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json report_to_json(const ExperimentReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.golden_checks) {
    checks.push_back(Json{{"label", c.label},
                          {"expected", c.expected},
                          {"actual", c.actual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
  }
  return Json{{"name", report.name},
              {"params", report.params},
              {"aggregates", report.aggregates},
              {"golden_checks", checks},
              {"all_checks_pass", report.all_checks_pass()},
              {"tables", report.tables},
              {"trials", report.trials}};
}

void write_trace_csv(const ExperimentReport& report, std::ostream& out) {
  out << "trial,generation,representation,emp_perf,exact_perf,n_beneficial,n_neutral,chose\n";
  for (const auto& row : report.trace) {
    // Representations contain neither commas nor quotes, so no quoting is needed.
    out << row.trial << ',' << row.generation << ',' << row.representation << ','
        << format_double(row.emp_perf) << ',' << (row.exact_perf ? format_double(*row.exact_perf) : "")
        << ',' << row.n_beneficial << ',' << row.n_neutral << ',' << to_string(row.chose) << '\n';
  }
}

void write_summary(const ExperimentReport& report, std::ostream& out) {
  out << "experiment: " << report.name << '\n';
  out << "params: " << report.params.dump() << '\n';
  out << "aggregates:\n";
  for (const auto& [key, value] : report.aggregates.items()) {
    out << "  " << key << " = " << value.dump() << '\n';
  }
  if (!report.golden_checks.empty()) {
    out << "golden checks:\n";
    for (const auto& c : report.golden_checks) {
      out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.label
          << ": expected " << format_double(c.expected) << ", actual " << format_double(c.actual)
          << ", tolerance " << format_double(c.tolerance) << '\n';
    }
  }
  out << "trials: " << report.trials.size() << ", trace rows: " << report.trace.size() << '\n';
}

}  // namespace evoforge
