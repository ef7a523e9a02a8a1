#pragma once

#include <cstddef>

#include "rtkit/dated_series.hpp"

namespace rtkit {

struct MfConfig {
  int numerator_days = 4;
  int denominator_days = 4;
  /// Feed raw rather than smoothed daily cases (pipeline option).
  bool use_raw_cases = false;

  void validate() const;
};

struct ModelFreeResult {
  /// Starts numerator_days + denominator_days - 1 days after the input.
  DatedSeries rt;
  /// Dates dropped because the earlier block summed to zero.
  std::size_t zero_denominator_days = 0;
};

/// Ratio of the most recent `numerator_days` of cases to the
/// `denominator_days` immediately before them, using the window ending at
/// each date. Windows touching an absent value are absent.
ModelFreeResult rt_model_free(const DatedSeries& daily_cases, const MfConfig& cfg = {});

}  // namespace rtkit
