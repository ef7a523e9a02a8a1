#include "rtkit/rt_estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rtkit/errors.hpp"

namespace rtkit {
namespace {

double required(const DatedSeries& s, Date d, const char* what) {
  const auto v = s.at(d);
  if (!v) throw InsufficientHistory(std::string("no ") + what + " value on " + format_iso_date(d));
  return *v;
}

bool all_zero(const DatedSeries& s) {
  for (const auto& v : s.values()) {
    if (v && *v != 0.0) return false;
  }
  return true;
}

}  // namespace

void EstimatorConfig::validate() const {
  if (window_days < 2) throw InvalidArgument("EstimatorConfig: window_days must be >= 2");
  if (!(case_threshold >= 1.0)) throw InvalidArgument("EstimatorConfig: case_threshold must be >= 1");
  if (incubation_shift_days < 0) throw InvalidArgument("EstimatorConfig: incubation_shift_days must be >= 0");
  if (!(asymptomatic_fraction >= 0.0 && asymptomatic_fraction < 1.0)) {
    throw InvalidArgument("EstimatorConfig: asymptomatic_fraction must be in [0, 1)");
  }
  if (!(gamma > 0.0) || !(k > 0.0)) throw InvalidArgument("EstimatorConfig: gamma and k must be > 0");
  if (substeps_per_day < 1) throw InvalidArgument("EstimatorConfig: substeps_per_day must be >= 1");
  minimizer.validate();
}

Date find_t0(const CountryPanel& panel, double threshold) {
  const DatedSeries& v = panel.confirmed;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] && *v[i] > threshold) return v.date_at(i);
  }
  throw ThresholdNeverReached("'" + panel.country + "' never exceeds " + std::to_string(threshold) +
                              " cumulative confirmed cases");
}

double exposed_effective(const DatedSeries& confirmed, Date t, const EstimatorConfig& cfg) {
  const Date lagged = add_days(t, -cfg.incubation_shift_days);
  if (confirmed.empty() || lagged < confirmed.start()) {
    throw InsufficientHistory("need confirmed cases on " + format_iso_date(lagged) + " (" +
                              std::to_string(cfg.incubation_shift_days) + " days before " + format_iso_date(t) + ")");
  }
  return required(confirmed, lagged, "confirmed") / (1.0 - cfg.asymptomatic_fraction);
}

SeirState<double> initial_state(const CountryPanel& panel, Date t, const EstimatorConfig& cfg) {
  const DatedSeries& confirmed = panel.fit_confirmed();
  const double v = required(confirmed, t, "confirmed");
  const double g = required(panel.fit_recovered(), t, "recovered");
  const double d = required(panel.fit_deaths(), t, "deaths");
  const double e = exposed_effective(confirmed, t, cfg);

  const double i = cfg.active_infected_init ? v - d - g : v;
  // With I = V this is N - V - E - D - G; the active variant keeps S + E + I + R = N.
  const double s = panel.population - e - i - (d + g);
  if (s < 0.0) {
    throw NegativeCompartment("'" + panel.country + "' on " + format_iso_date(t) +
                              ": confirmed + exposed + deaths + recovered exceeds the population");
  }
  if (i < 0.0) {
    throw NegativeCompartment("'" + panel.country + "' on " + format_iso_date(t) +
                              ": deaths + recovered exceed confirmed cases");
  }
  return SeirState<double>(s, e, i, d + g);
}

std::vector<double> observed_new_cases(const CountryPanel& panel, Date window_start, const EstimatorConfig& cfg) {
  const DatedSeries& confirmed = panel.fit_confirmed();
  std::vector<double> out(static_cast<std::size_t>(cfg.window_days));
  double prev = required(confirmed, window_start, "confirmed");
  for (int j = 0; j < cfg.window_days; ++j) {
    const double next = required(confirmed, add_days(window_start, j + 1), "confirmed");
    // Reporting corrections can make cumulative counts dip.
    out[static_cast<std::size_t>(j)] = std::max(0.0, next - prev);
    prev = next;
  }
  return out;
}

double window_cost(const SeirState<double>& x0, std::span<const double> observed, double beta, double n_pop,
                   const EstimatorConfig& cfg) {
  SeirParams<double> params{beta, cfg.gamma, cfg.k, n_pop};
  Trajectory<double> traj;
  try {
    traj = integrate(x0, params, static_cast<int>(observed.size()), cfg.substeps_per_day);
  } catch (const NonFiniteState&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const DatedSeries predicted = daily_new_infected(traj);
  double cost = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const double diff = observed[j] - *predicted[j];
    cost += diff * diff;
  }
  return cost;
}

WindowFit fit_window(const CountryPanel& panel, Date window_start, const EstimatorConfig& cfg) {
  cfg.validate();
  const std::vector<double> observed = observed_new_cases(panel, window_start, cfg);
  const SeirState<double> x0 = initial_state(panel, window_start, cfg);

  ScalarObjective objective([&](double beta) { return window_cost(x0, observed, beta, panel.population, cfg); });
  const MinimizeResult m = minimize_scalar(objective, cfg.minimizer);
  return {m.x_min, m.f_min, m.converged, m.evaluations};
}

RtResult estimate_rt(const CountryPanel& panel, const EstimatorConfig& cfg, Date end_date) {
  cfg.validate();
  RtResult result;
  result.t0 = find_t0(panel, cfg.case_threshold);

  const DatedSeries& confirmed = panel.fit_confirmed();
  if (end_date > confirmed.last()) {
    result.diagnostics.push_back("end date " + format_iso_date(end_date) + " is past the data; using " +
                                 format_iso_date(confirmed.last()));
    end_date = confirmed.last();
  }
  if (all_zero(panel.recovered)) {
    result.diagnostics.push_back("'" + panel.country + "' reports no recoveries; removed compartment holds deaths only");
  }

  const Date first_end = add_days(result.t0, cfg.window_days);
  if (first_end > end_date) {
    result.diagnostics.push_back("'" + panel.country + "': fewer than " + std::to_string(cfg.window_days) +
                                 " days between t0 " + format_iso_date(result.t0) + " and " + format_iso_date(end_date));
    return result;
  }

  const auto n = static_cast<std::size_t>(days_between(first_end, end_date)) + 1;
  result.rt = DatedSeries::absent(first_end, n);
  result.beta = DatedSeries::absent(first_end, n);
  result.residual = DatedSeries::absent(first_end, n);
  result.converged = DatedSeries::absent(first_end, n);

  for (std::size_t w = 0; w < n; ++w) {
    const Date start = add_days(result.t0, static_cast<long>(w));
    const Date reported = add_days(start, cfg.window_days);
    try {
      const WindowFit fit = fit_window(panel, start, cfg);
      result.beta.set(reported, fit.beta_star);
      result.rt.set(reported, fit.beta_star / cfg.gamma);
      result.residual.set(reported, fit.residual);
      result.converged.set(reported, fit.converged ? 1.0 : 0.0);
      if (!fit.converged) {
        result.diagnostics.push_back(format_iso_date(reported) + ": minimizer hit the iteration limit");
      }
    } catch (const Error& e) {
      result.diagnostics.push_back(format_iso_date(reported) + ": window skipped: " + e.what());
    }
  }
  return result;
}

}  // namespace rtkit
