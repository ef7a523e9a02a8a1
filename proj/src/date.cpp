#include "rtkit/date.hpp"

#include <charconv>
#include <cstdio>

#include "rtkit/errors.hpp"

namespace rtkit {
namespace {

bool parse_uint(std::string_view text, unsigned& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::optional<Date> checked(int y, unsigned m, unsigned d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

}  // namespace

std::optional<Date> try_parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  unsigned y = 0, m = 0, d = 0;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
      !parse_uint(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  return checked(static_cast<int>(y), m, d);
}

Date parse_iso_date(std::string_view text) {
  if (auto d = try_parse_iso_date(text)) return *d;
  throw InvalidArgument("not an ISO-8601 date (YYYY-MM-DD): '" + std::string(text) + "'");
}

std::optional<Date> try_parse_us_short_date(std::string_view text) {
  const auto s1 = text.find('/');
  if (s1 == std::string_view::npos) return std::nullopt;
  const auto s2 = text.find('/', s1 + 1);
  if (s2 == std::string_view::npos) return std::nullopt;
  unsigned m = 0, d = 0, y = 0;
  if (!parse_uint(text.substr(0, s1), m) || !parse_uint(text.substr(s1 + 1, s2 - s1 - 1), d) ||
      !parse_uint(text.substr(s2 + 1), y)) {
    return std::nullopt;
  }
  if (text.size() - s2 - 1 == 2) {
    y += 2000;
  } else if (text.size() - s2 - 1 != 4) {
    return std::nullopt;
  }
  return checked(static_cast<int>(y), m, d);
}

std::string format_iso_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace rtkit
