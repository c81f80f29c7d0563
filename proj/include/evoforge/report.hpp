#pragma once

#include <ostream>
#include <string>

#include "evoforge/experiments.hpp"

namespace evoforge {

// %.17g; round-trips every double.
std::string format_double(double v);

Json report_to_json(const ExperimentReport& report);

// Header: trial,generation,representation,emp_perf,exact_perf,n_beneficial,n_neutral,chose
void write_trace_csv(const ExperimentReport& report, std::ostream& out);

void write_summary(const ExperimentReport& report, std::ostream& out);

}  // namespace evoforge
