#pragma once

#include <string>

#include "rtkit/dated_series.hpp"

namespace rtkit {

/// Country-level cumulative case counts on one shared daily calendar.
///
/// The `*_smoothed` series are empty until smooth_cases() fills them. Model
/// fitting reads the smoothed series when present and the raw ones otherwise.
struct CountryPanel {
  std::string country;
  double population = 0.0;

  DatedSeries confirmed;
  DatedSeries recovered;
  DatedSeries deaths;

  DatedSeries confirmed_smoothed;
  DatedSeries recovered_smoothed;
  DatedSeries deaths_smoothed;

  bool is_smoothed() const noexcept { return !confirmed_smoothed.empty(); }
  const DatedSeries& fit_confirmed() const noexcept { return is_smoothed() ? confirmed_smoothed : confirmed; }
  const DatedSeries& fit_recovered() const noexcept { return is_smoothed() ? recovered_smoothed : recovered; }
  const DatedSeries& fit_deaths() const noexcept { return is_smoothed() ? deaths_smoothed : deaths; }

  /// Checks population > 0, identical ranges and non-negative raw counts.
  void validate() const;
};

/// Routing-request mobility index streams for one country (baseline 100).
struct MobilitySeries {
  std::string country;
  DatedSeries driving;
  DatedSeries walking;
  DatedSeries transit;
  /// Mean over streams present each day, short gaps interpolated.
  DatedSeries combined;
  /// Seven-day trailing mean of `combined`.
  DatedSeries combined_smoothed;
};

}  // namespace rtkit
