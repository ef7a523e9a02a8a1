#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace rtkit {

/// Calendar day. Arithmetic is in whole days.
using Date = std::chrono::sys_days;

inline Date add_days(Date d, long n) { return d + std::chrono::days{n}; }

/// Signed number of days from `from` to `to`.
inline long days_between(Date from, Date to) { return static_cast<long>((to - from).count()); }

inline Date make_date(int year, unsigned month, unsigned day) {
  return Date{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}};
}

/// Parses YYYY-MM-DD. Returns nullopt on anything else.
std::optional<Date> try_parse_iso_date(std::string_view text);

/// Parses YYYY-MM-DD or throws InvalidArgument.
Date parse_iso_date(std::string_view text);

/// Parses the M/D/YY form used in CSSE headers (years are 20YY).
std::optional<Date> try_parse_us_short_date(std::string_view text);

std::string format_iso_date(Date d);

}  // namespace rtkit
