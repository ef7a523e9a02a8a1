#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rtkit/date.hpp"

namespace rtkit {

/// A run of consecutive daily values starting at `start()`.
///
/// Each slot is either a finite number or explicitly absent. Lookups outside
/// the covered range also report absent, so callers can index by date without
/// bounds bookkeeping.
class DatedSeries {
 public:
  using Value = std::optional<double>;

  DatedSeries() = default;

  /// Throws InvalidArgument if any present value is not finite.
  DatedSeries(Date start, std::vector<Value> values);

  /// All values present.
  static DatedSeries dense(Date start, std::span<const double> values);

  /// `n` absent slots.
  static DatedSeries absent(Date start, std::size_t n);

  Date start() const noexcept { return start_; }
  /// Last covered date. Only meaningful when non-empty.
  Date last() const noexcept { return add_days(start_, static_cast<long>(values_.size()) - 1); }
  /// One past the last covered date.
  Date end() const noexcept { return add_days(start_, static_cast<long>(values_.size())); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  bool covers(Date d) const noexcept { return !empty() && d >= start_ && d < end(); }
  Date date_at(std::size_t i) const noexcept { return add_days(start_, static_cast<long>(i)); }

  const Value& operator[](std::size_t i) const { return values_[i]; }
  Value at(Date d) const;

  /// Throws InvalidArgument when `d` is outside the range or absent.
  double value(Date d) const;

  /// Number of present values.
  std::size_t present_count() const noexcept;

  const std::vector<Value>& values() const noexcept { return values_; }

  /// Assigns a value; grows the series forward if `d` lies past the end.
  /// `d` may not precede `start()` unless the series is empty.
  void set(Date d, Value v);

  /// Same values, relabelled `days` later.
  DatedSeries shifted(long days) const;

  /// Restricted to [from, to], inclusive. May be empty.
  DatedSeries slice(Date from, Date to) const;

  friend bool operator==(const DatedSeries& a, const DatedSeries& b) {
    if (a.values_.empty() && b.values_.empty()) return true;
    return a.start_ == b.start_ && a.values_ == b.values_;
  }

 private:
  Date start_{};
  std::vector<Value> values_;
};

}  // namespace rtkit
