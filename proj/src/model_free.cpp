#include "rtkit/model_free.hpp"

#include <vector>

#include "rtkit/errors.hpp"

namespace rtkit {

void MfConfig::validate() const {
  if (numerator_days < 1 || denominator_days < 1) throw InvalidArgument("MfConfig: block lengths must be >= 1");
}

ModelFreeResult rt_model_free(const DatedSeries& daily_cases, const MfConfig& cfg) {
  cfg.validate();
  const auto num = static_cast<std::size_t>(cfg.numerator_days);
  const auto den = static_cast<std::size_t>(cfg.denominator_days);
  const std::size_t span = num + den;
  for (const auto& v : daily_cases.values()) {
    if (v && *v < 0.0) throw InvalidArgument("rt_model_free: daily cases must be non-negative");
  }

  ModelFreeResult result;
  if (daily_cases.size() < span) return result;

  const std::size_t n = daily_cases.size() - span + 1;
  std::vector<DatedSeries::Value> out(n);
  for (std::size_t o = 0; o < n; ++o) {
    double recent = 0.0, earlier = 0.0;
    bool complete = true;
    for (std::size_t j = 0; j < span && complete; ++j) {
      const auto& v = daily_cases[o + j];
      if (!v) {
        complete = false;
      } else if (j < den) {
        earlier += *v;
      } else {
        recent += *v;
      }
    }
    if (!complete) continue;
    if (earlier == 0.0) {
      ++result.zero_denominator_days;
      continue;
    }
    out[o] = recent / earlier;
  }
  result.rt = DatedSeries(daily_cases.date_at(span - 1), std::move(out));
  return result;
}

}  // namespace rtkit
