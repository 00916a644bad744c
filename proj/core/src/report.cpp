#include "dbclab/report.hpp"

#include <algorithm>
#include <optional>

#include <fmt/format.h>

#include "dbclab/rates.hpp"

namespace dbclab {
namespace {

std::optional<double> slope_upto(const std::vector<double>& xs, const std::vector<double>& ys,
                                 std::size_t count) {
  if (count < 2) return std::nullopt;
  for (std::size_t k = 0; k < count; ++k)
    if (!(ys[k] > 0.0)) return std::nullopt;
  return fit_rate(std::span(xs.data(), count), std::span(ys.data(), count)).slope;
}

std::string fmt_opt(const std::optional<double>& v, const char* none = "-") {
  return v ? fmt::format("{:.4f}", *v) : std::string(none);
}

}  // namespace

void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "param,metric_name,value,slope_so_far\n";
  for (std::size_t k = 0; k < report.abscissa.size(); ++k)
    for (const auto& m : report.metrics) {
      const auto s = slope_upto(report.abscissa, m.values, k + 1);
      out << fmt::format("{:.17g},{},{:.17g},{}\n", report.abscissa[k], m.name, m.values[k],
                         s ? fmt::format("{:.17g}", *s) : std::string());
    }
}

std::string format_rate_report(const RateReport& report) {
  std::string s = fmt::format("{} sweep (abscissa {}, config hash {:016x})\n", to_string(report.kind),
                              report.abscissa_name, report.config_hash);
  s += fmt::format("{:>12} {:>12} {:>12}", report.abscissa_name.substr(0, 12), "eps", "kappa");
  for (const auto& m : report.metrics) s += fmt::format(" {:>24}", m.name);
  s += "\n";
  for (std::size_t k = 0; k < report.abscissa.size(); ++k) {
    s += fmt::format("{:>12.5g} {:>12.5g} {:>12.5g}", report.abscissa[k], report.points[k].eps,
                     report.points[k].kappa);
    for (const auto& m : report.metrics) s += fmt::format(" {:>24.6e}", m.values[k]);
    s += "\n";
  }
  s += fmt::format("{:>38}", "slope");
  for (const auto& m : report.metrics)
    s += fmt::format(" {:>24}", fmt_opt(m.fit ? std::optional<double>(m.fit->slope) : std::nullopt));
  s += "\n";
  s += fmt::format("{:>38}", "correlation");
  for (const auto& m : report.metrics)
    s += fmt::format(" {:>24}", fmt_opt(m.fit ? std::optional<double>(m.fit->correlation) : std::nullopt));
  s += "\n";
  if (!report.half_dt.empty()) {
    s += fmt::format("{:>38}", "slope at dt/2");
    for (const auto& m : report.half_dt)
      s += fmt::format(" {:>24}", fmt_opt(m.fit ? std::optional<double>(m.fit->slope) : std::nullopt));
    s += "\n";
    s += fmt::format("{:>38}", "|slope shift|");
    for (const auto& m : report.metrics) s += fmt::format(" {:>24}", fmt_opt(report.stabilization_shift(m.name)));
    s += "\n";
  }
  if (!report.apriori.rows.empty()) s += "\n" + format_apriori(report.apriori);
  return s;
}

void write_apriori_csv(std::ostream& out, const AprioriTable& table) {
  if (table.rows.empty()) return;
  out << table.parameter;
  for (const auto& [name, v] : table.rows.front().columns()) out << ',' << name;
  out << '\n';
  for (const auto& r : table.rows) {
    out << fmt::format("{:.17g}", r.param);
    for (const auto& [name, v] : r.columns()) out << fmt::format(",{:.17g}", v);
    out << '\n';
  }
}

std::string format_apriori(const AprioriTable& table) {
  if (table.rows.empty()) return "a priori table: no rows\n";
  std::string s = "a priori bounds\n";
  s += fmt::format("{:>10}", table.parameter);
  for (const auto& [name, v] : table.rows.front().columns()) s += fmt::format(" {:>25}", name);
  s += "\n";
  for (const auto& r : table.rows) {
    s += fmt::format("{:>10.5g}", r.param);
    for (const auto& [name, v] : r.columns()) s += fmt::format(" {:>25.6e}", v);
    s += "\n";
  }
  return s;
}

void write_stability_csv(std::ostream& out, const std::vector<StabilityReport>& reports) {
  out << "variant,delta,lhs,rhs,ratio\n";
  for (const auto& r : reports)
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.variant, r.delta, r.lhs, r.rhs, r.ratio);
}

std::string format_stability(const std::vector<StabilityReport>& reports) {
  std::string s;
  for (const auto& r : reports) {
    s += fmt::format("{}  delta = {:.3g}: lhs = {:.6e}, rhs = {:.6e}, ratio = {:.6f}\n", r.variant,
                     r.delta, r.lhs, r.rhs, r.ratio);
    for (const auto& [n, v] : r.lhs_terms) s += fmt::format("    lhs {:<22} {:.6e}\n", n, v);
    for (const auto& [n, v] : r.rhs_terms) s += fmt::format("    rhs {:<22} {:.6e}\n", n, v);
  }
  if (!reports.empty())
    s += "note: ||f||_{L2 V'} is replaced by the larger ||f||_{L2 H}\n";
  return s;
}

std::string format_checks(const CheckReport& report) {
  std::string s;
  for (const auto& e : report.entries)
    s += fmt::format("{:<6} {:<10} {:<32} defect {:.3e} (tol {:.1e})\n", e.passed ? "PASS" : "FAIL",
                     e.grid, e.name, e.value, e.tolerance);
  return s;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<StepDiagnostics>& diagnostics) {
  out << "t,newton_iterations,linear_iterations,residual\n";
  for (const auto& d : diagnostics)
    out << fmt::format("{:.17g},{},{},{:.6e}\n", d.t, d.newton_iterations, d.linear_iterations, d.residual);
}

}  // namespace dbclab
