#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dbclab/apriori.hpp"
#include "dbclab/checks.hpp"
#include "dbclab/stability.hpp"
#include "dbclab/stepper.hpp"
#include "dbclab/sweeps.hpp"

namespace dbclab {

/// CSV with header `param,metric_name,value,slope_so_far`; param is the fitting
/// abscissa and slope_so_far fits the rows up to and including this one (empty
/// for the first row or when a value is zero).
void write_rate_csv(std::ostream& out, const RateReport& report);
std::string format_rate_report(const RateReport& report);

void write_apriori_csv(std::ostream& out, const AprioriTable& table);
std::string format_apriori(const AprioriTable& table);

void write_stability_csv(std::ostream& out, const std::vector<StabilityReport>& reports);
std::string format_stability(const std::vector<StabilityReport>& reports);

std::string format_checks(const CheckReport& report);

void write_diagnostics_csv(std::ostream& out, const std::vector<StepDiagnostics>& diagnostics);

}  // namespace dbclab
