#include <vector>

#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"

namespace rtkit {

DatedSeries trailing_mean(const DatedSeries& series, int window, bool partial_prefix) {
  if (window < 1) throw InvalidArgument("trailing_mean: window must be >= 1");
  const std::size_t n = series.size();
  const auto w = static_cast<std::size_t>(window);
  std::vector<DatedSeries::Value> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < w && !partial_prefix) continue;
    const std::size_t first = i + 1 >= w ? i + 1 - w : 0;
    double sum = 0.0;
    bool complete = true;
    for (std::size_t j = first; j <= i; ++j) {
      if (!series[j]) {
        complete = false;
        break;
      }
      sum += *series[j];
    }
    if (complete) out[i] = sum / static_cast<double>(i - first + 1);
  }
  return DatedSeries(series.start(), std::move(out));
}

DatedSeries interpolate_gaps(const DatedSeries& series, int max_gap) {
  std::vector<DatedSeries::Value> out = series.values();
  const std::size_t n = out.size();
  std::size_t i = 0;
  while (i < n) {
    if (out[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !out[j]) ++j;
    const std::size_t gap = j - i;
    if (i > 0 && j < n && gap <= static_cast<std::size_t>(max_gap)) {
      const double left = *out[i - 1];
      const double right = *out[j];
      const double span = static_cast<double>(gap + 1);
      for (std::size_t g = 0; g < gap; ++g) {
        out[i + g] = left + (right - left) * static_cast<double>(g + 1) / span;
      }
    }
    i = j;
  }
  return DatedSeries(series.start(), std::move(out));
}

CountryPanel smooth_cases(CountryPanel panel) {
  panel.confirmed_smoothed = trailing_mean(panel.confirmed, 3, true);
  panel.recovered_smoothed = trailing_mean(panel.recovered, 3, true);
  panel.deaths_smoothed = trailing_mean(panel.deaths, 3, true);
  return panel;
}

DatedSeries daily_increments(const DatedSeries& cumulative) {
  std::vector<DatedSeries::Value> out(cumulative.size());
  for (std::size_t i = 1; i < cumulative.size(); ++i) {
    if (cumulative[i] && cumulative[i - 1]) out[i] = *cumulative[i] - *cumulative[i - 1];
  }
  return DatedSeries(cumulative.start(), std::move(out));
}

}  // namespace rtkit
