#include "rtkit/dated_series.hpp"

#include <algorithm>
#include <cmath>

#include "rtkit/errors.hpp"

namespace rtkit {

DatedSeries::DatedSeries(Date start, std::vector<Value> values) : start_(start), values_(std::move(values)) {
  for (const auto& v : values_) {
    if (v && !std::isfinite(*v)) throw InvalidArgument("DatedSeries values must be finite or absent");
  }
}

DatedSeries DatedSeries::dense(Date start, std::span<const double> values) {
  return DatedSeries(start, std::vector<Value>(values.begin(), values.end()));
}

DatedSeries DatedSeries::absent(Date start, std::size_t n) { return DatedSeries(start, std::vector<Value>(n)); }

DatedSeries::Value DatedSeries::at(Date d) const {
  if (!covers(d)) return std::nullopt;
  return values_[static_cast<std::size_t>(days_between(start_, d))];
}

double DatedSeries::value(Date d) const {
  const auto v = at(d);
  if (!v) throw InvalidArgument("no value on " + format_iso_date(d));
  return *v;
}

std::size_t DatedSeries::present_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](const Value& v) { return v.has_value(); }));
}

void DatedSeries::set(Date d, Value v) {
  if (v && !std::isfinite(*v)) throw InvalidArgument("DatedSeries values must be finite or absent");
  if (values_.empty()) {
    start_ = d;
    values_.push_back(v);
    return;
  }
  const long offset = days_between(start_, d);
  if (offset < 0) throw InvalidArgument("cannot set a date before the series start");
  if (static_cast<std::size_t>(offset) >= values_.size()) values_.resize(static_cast<std::size_t>(offset) + 1);
  values_[static_cast<std::size_t>(offset)] = v;
}

DatedSeries DatedSeries::shifted(long days) const {
  DatedSeries out = *this;
  out.start_ = add_days(start_, days);
  return out;
}

DatedSeries DatedSeries::slice(Date from, Date to) const {
  if (empty()) return {};
  const Date lo = std::max(from, start_);
  const Date hi = std::min(to, last());
  if (hi < lo) return {};
  const auto first = static_cast<std::size_t>(days_between(start_, lo));
  const auto n = static_cast<std::size_t>(days_between(lo, hi)) + 1;
  return DatedSeries(lo, std::vector<Value>(values_.begin() + static_cast<long>(first),
                                            values_.begin() + static_cast<long>(first + n)));
}

}  // namespace rtkit
