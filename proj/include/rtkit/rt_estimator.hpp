#pragma once

#include <span>
#include <string>
#include <vector>

#include "rtkit/dated_series.hpp"
#include "rtkit/optimizer.hpp"
#include "rtkit/panel.hpp"
#include "rtkit/seir.hpp"

namespace rtkit {

struct EstimatorConfig {
  int window_days = 7;
  double case_threshold = 1000.0;
  int incubation_shift_days = 5;
  double asymptomatic_fraction = 0.43;
  double gamma = 1.0 / 30.0;
  double k = 1.0 / 5.0;
  /// Start the infected compartment at V - D - G rather than V.
  bool active_infected_init = false;
  int substeps_per_day = 10;
  MinimizeOptions minimizer{};

  void validate() const;
};

/// Sliding-window fit output. All series share one date index; each entry is
/// the estimate for the window ending on that date.
struct RtResult {
  DatedSeries rt;
  DatedSeries beta;
  DatedSeries residual;
  /// 1 when the minimizer converged, 0 otherwise.
  DatedSeries converged;
  Date t0{};
  std::vector<std::string> diagnostics;
};

struct WindowFit {
  double beta_star = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

/// Earliest date whose raw cumulative confirmed count exceeds `threshold`.
Date find_t0(const CountryPanel& panel, double threshold);

/// Exposed count implied by the confirmed series: confirmed(t - shift) / (1 - asymptomatic_fraction).
double exposed_effective(const DatedSeries& confirmed, Date t, const EstimatorConfig& cfg);

/// Model state at `t` reconstructed from the observed panel:
/// S = N - V - E_eff - D - G, E = E_eff, I = V, R = D + G.
SeirState<double> initial_state(const CountryPanel& panel, Date t, const EstimatorConfig& cfg);

/// Observed daily increments V(t+1) - V(t) over [window_start, window_start + window_days),
/// clamped at zero.
std::vector<double> observed_new_cases(const CountryPanel& panel, Date window_start, const EstimatorConfig& cfg);

/// Sum of squared differences between observed and model daily new infections
/// for a given beta.
double window_cost(const SeirState<double>& x0, std::span<const double> observed, double beta, double n_pop,
                   const EstimatorConfig& cfg);

/// Least-squares beta over one window.
WindowFit fit_window(const CountryPanel& panel, Date window_start, const EstimatorConfig& cfg);

/// Runs fit_window for every window start from t0 through end_date - window_days.
/// The estimate of each window is reported on its final day. Failed windows
/// leave a gap and a diagnostic.
RtResult estimate_rt(const CountryPanel& panel, const EstimatorConfig& cfg, Date end_date);

}  // namespace rtkit
