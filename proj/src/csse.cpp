#include <algorithm>
#include <cmath>
#include <string>

#include "rtkit/csv.hpp"
#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"

namespace rtkit {
namespace {

constexpr std::size_t kCsseDateColumn = 4;  // Province/State, Country/Region, Lat, Long

}  // namespace

DatedSeries parse_csse_series(const std::filesystem::path& file, std::string_view country) {
  csv::Reader reader(file);
  auto header = reader.next();
  if (!header || header->size() <= kCsseDateColumn) {
    throw MalformedRow(reader.name(), reader.line(), "expected CSSE header Province/State,Country/Region,Lat,Long,<dates>");
  }

  std::vector<Date> dates;
  for (std::size_t c = kCsseDateColumn; c < header->size(); ++c) {
    const auto d = try_parse_us_short_date((*header)[c]);
    if (!d) throw MalformedRow(reader.name(), reader.line(), "bad date column '" + (*header)[c] + "'");
    if (!dates.empty() && *d != add_days(dates.back(), 1)) {
      throw DateGap(reader.name() + ": header dates jump from " + format_iso_date(dates.back()) + " to " +
                    format_iso_date(*d));
    }
    dates.push_back(*d);
  }

  std::vector<double> totals(dates.size(), 0.0);
  bool found = false;
  while (auto row = reader.next()) {
    if (row->size() != header->size()) {
      throw MalformedRow(reader.name(), reader.line(),
                         "expected " + std::to_string(header->size()) + " fields, got " + std::to_string(row->size()));
    }
    if (!same_country((*row)[1], country)) continue;
    found = true;
    for (std::size_t c = 0; c < dates.size(); ++c) {
      bool ok = true;
      const auto v = csv::parse_number((*row)[kCsseDateColumn + c], ok);
      if (!ok || (v && (*v < 0.0 || !std::isfinite(*v)))) {
        throw MalformedRow(reader.name(), reader.line(), "bad count '" + (*row)[kCsseDateColumn + c] + "'");
      }
      totals[c] += v.value_or(0.0);
    }
  }
  if (!found) throw UnknownCountry("country '" + std::string(country) + "' not found in " + reader.name());
  return DatedSeries::dense(dates.front(), totals);
}

double parse_population(const std::filesystem::path& file, std::string_view country) {
  csv::Reader reader(file);
  auto header = reader.next();
  if (!header) throw MalformedRow(reader.name(), reader.line(), "empty population file");

  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header->size(); ++c) {
      if ((*header)[c] == name) return c;
    }
    return std::nullopt;
  };

  const auto pop_col = column("Population");
  const auto country_col = column("Country_Region");
  const auto province_col = column("Province_State");
  const auto admin_col = column("Admin2");
  const bool uid_table = pop_col && country_col && province_col;
  if (!uid_table && header->size() != 2) {
    throw MalformedRow(reader.name(), reader.line(),
                       "expected a CSSE UID lookup table or a country,population override file");
  }

  while (auto row = reader.next()) {
    if (row->size() != header->size()) {
      throw MalformedRow(reader.name(), reader.line(), "wrong field count");
    }
    std::size_t name_col = 0, value_col = 1;
    if (uid_table) {
      if (!(*row)[*province_col].empty()) continue;
      if (admin_col && !(*row)[*admin_col].empty()) continue;
      name_col = *country_col;
      value_col = *pop_col;
    }
    if (!same_country((*row)[name_col], country)) continue;
    bool ok = true;
    const auto v = csv::parse_number((*row)[value_col], ok);
    if (!ok || !v || !(*v > 0.0)) {
      throw MalformedRow(reader.name(), reader.line(), "bad population '" + (*row)[value_col] + "'");
    }
    return *v;
  }
  throw UnknownCountry("no population for '" + std::string(country) + "' in " + reader.name());
}

CountryPanel parse_csse(const std::filesystem::path& confirmed_file, const std::filesystem::path& recovered_file,
                        const std::filesystem::path& deaths_file, const std::filesystem::path& population_file,
                        std::string_view country) {
  CountryPanel panel;
  panel.country = canonical_country(country);
  panel.confirmed = parse_csse_series(confirmed_file, country);
  panel.recovered = parse_csse_series(recovered_file, country);
  panel.deaths = parse_csse_series(deaths_file, country);
  panel.population = parse_population(population_file, country);

  // The three feeds are published together but have not always had the same
  // trailing date; keep the common range.
  const Date lo = std::max({panel.confirmed.start(), panel.recovered.start(), panel.deaths.start()});
  const Date hi = std::min({panel.confirmed.last(), panel.recovered.last(), panel.deaths.last()});
  if (hi < lo) throw DateGap("CSSE feeds for '" + std::string(country) + "' share no dates");
  panel.confirmed = panel.confirmed.slice(lo, hi);
  panel.recovered = panel.recovered.slice(lo, hi);
  panel.deaths = panel.deaths.slice(lo, hi);
  panel.validate();
  return panel;
}

void CountryPanel::validate() const {
  if (!(population > 0.0)) throw InvalidArgument("panel population must be > 0");
  if (confirmed.empty()) throw InvalidArgument("panel has no confirmed series");
  for (const DatedSeries* s : {&recovered, &deaths}) {
    if (s->start() != confirmed.start() || s->size() != confirmed.size()) {
      throw InvalidArgument("panel series must share one date range");
    }
  }
  for (const DatedSeries* s : {&confirmed, &recovered, &deaths}) {
    for (const auto& v : s->values()) {
      if (v && *v < 0.0) throw InvalidArgument("panel counts must be non-negative");
    }
  }
}

}  // namespace rtkit
