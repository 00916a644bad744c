#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dbclab/apriori.hpp"
#include "dbclab/rates.hpp"
#include "dbclab/run_config.hpp"
#include "dbclab/stepper.hpp"

namespace dbclab {

/// One run of `cfg`, optionally with a different problem variant.  Step
/// failures are rethrown as SolverError naming the variant.
RunResult simulate(const RunConfig& cfg, const ProblemVariant& variant,
                   const std::vector<Observer*>& observers = {});
RunResult simulate(const RunConfig& cfg, const std::vector<Observer*>& observers = {});

/// Calls job(k) for k in [0, n) on up to `jobs` threads.  Every job runs to
/// completion; afterwards the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& job);

enum class SweepKind { Kappa, Eps, Joint };

struct SweepPoint {
  double eps = 1.0;
  double kappa = 1.0;
};

struct MetricSeries {
  std::string name;
  std::vector<double> values;
  std::optional<RateFit> fit;  // absent when some value is zero
};

/// Metric names, in report order.
const std::vector<std::string>& metric_names();

/// Fits every series against the abscissa.
std::vector<MetricSeries> fit_metrics(const std::vector<double>& abscissa,
                                      std::vector<MetricSeries> series);

struct RateReport {
  SweepKind kind = SweepKind::Kappa;
  std::string abscissa_name;
  std::vector<SweepPoint> points;
  std::vector<double> abscissa;
  std::vector<MetricSeries> metrics;
  /// Same sweep repeated at dt/2, when requested.
  std::vector<MetricSeries> half_dt;
  AprioriTable apriori;
  std::uint64_t config_hash = 0;

  const MetricSeries& metric(const std::string& name) const;
  /// |slope(dt) - slope(dt/2)|, or nullopt without a stabilization pass.
  std::optional<double> stabilization_shift(const std::string& name) const;
};

struct SweepOptions {
  unsigned jobs = 1;
  bool stabilization = true;
};

/// Full problem at each kappa (eps fixed from `base`) against the eps-limit reference.
/// kappas must be strictly decreasing with at least two entries.
RateReport sweep_kappa(const RunConfig& base, const std::vector<double>& kappas,
                       const SweepOptions& options = {});
/// Full problem at each eps (kappa fixed from `base`) against the kappa-limit reference.
RateReport sweep_eps(const RunConfig& base, const std::vector<double>& epss,
                     const SweepOptions& options = {});
/// Full problem at each (eps, kappa) against the double-limit reference, fitted
/// against sqrt(eps) + sqrt(kappa).
RateReport sweep_joint(const RunConfig& base, const std::vector<SweepPoint>& points,
                       const SweepOptions& options = {});

std::string to_string(SweepKind kind);

}  // namespace dbclab
