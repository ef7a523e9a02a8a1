#include <cmath>
#include <map>
#include <string>

#include "rtkit/csv.hpp"
#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"

namespace rtkit {

MobilitySeries parse_mobility(const std::filesystem::path& file, std::string_view country) {
  csv::Reader reader(file);
  auto header = reader.next();
  if (!header || header->size() < 4 || (*header)[0] != "geo_type" || (*header)[1] != "region" ||
      (*header)[2] != "transportation_type") {
    throw MalformedRow(reader.name(), reader.line(), "expected Apple mobility header geo_type,region,transportation_type,...");
  }

  // Older snapshots carry four key columns, later ones six; dates follow.
  std::size_t first_date = 3;
  while (first_date < header->size() && !try_parse_iso_date((*header)[first_date])) ++first_date;
  if (first_date == header->size()) throw MalformedRow(reader.name(), reader.line(), "no date columns");

  std::vector<Date> dates;
  for (std::size_t c = first_date; c < header->size(); ++c) {
    const auto d = try_parse_iso_date((*header)[c]);
    if (!d) throw MalformedRow(reader.name(), reader.line(), "bad date column '" + (*header)[c] + "'");
    if (!dates.empty() && *d <= dates.back()) {
      throw MalformedRow(reader.name(), reader.line(), "date columns are not increasing");
    }
    dates.push_back(*d);
  }
  const Date start = dates.front();
  const auto span = static_cast<std::size_t>(days_between(start, dates.back())) + 1;

  MobilitySeries m;
  m.country = canonical_country(country);
  bool matched = false;
  std::map<std::string, DatedSeries*> streams{{"driving", &m.driving}, {"walking", &m.walking}, {"transit", &m.transit}};

  while (auto row = reader.next()) {
    if (row->size() != header->size()) {
      throw MalformedRow(reader.name(), reader.line(),
                         "expected " + std::to_string(header->size()) + " fields, got " + std::to_string(row->size()));
    }
    if ((*row)[0] != "country/region" || !same_country((*row)[1], country)) continue;
    matched = true;
    const auto it = streams.find((*row)[2]);
    if (it == streams.end()) continue;

    // Dates missing from the header stay absent.
    std::vector<DatedSeries::Value> values(span);
    for (std::size_t c = 0; c < dates.size(); ++c) {
      bool ok = true;
      const auto v = csv::parse_number((*row)[first_date + c], ok);
      if (!ok || (v && (*v < 0.0 || !std::isfinite(*v)))) {
        throw MalformedRow(reader.name(), reader.line(), "bad index value '" + (*row)[first_date + c] + "'");
      }
      values[static_cast<std::size_t>(days_between(start, dates[c]))] = v;
    }
    *it->second = DatedSeries(start, std::move(values));
  }

  if (!matched) throw UnknownCountry("country '" + std::string(country) + "' not found in " + reader.name());
  if (m.driving.empty() && m.walking.empty() && m.transit.empty()) {
    throw NoStreams("no driving/walking/transit rows for '" + std::string(country) + "' in " + reader.name());
  }
  combine_streams(m);
  return m;
}

void combine_streams(MobilitySeries& m, int max_gap, int smoothing_days) {
  const DatedSeries* streams[] = {&m.driving, &m.walking, &m.transit};
  bool any = false;
  Date lo{}, hi{};
  for (const auto* s : streams) {
    if (s->empty()) continue;
    if (!any || s->start() < lo) lo = s->start();
    if (!any || s->last() > hi) hi = s->last();
    any = true;
  }
  if (!any) throw NoStreams("mobility series for '" + m.country + "' has no streams");

  const auto n = static_cast<std::size_t>(days_between(lo, hi)) + 1;
  std::vector<DatedSeries::Value> combined(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Date d = add_days(lo, static_cast<long>(i));
    double sum = 0.0;
    int count = 0;
    for (const auto* s : streams) {
      if (const auto v = s->at(d)) {
        sum += *v;
        ++count;
      }
    }
    if (count > 0) combined[i] = sum / count;
  }
  m.combined = interpolate_gaps(DatedSeries(lo, std::move(combined)), max_gap);
  m.combined_smoothed = trailing_mean(m.combined, smoothing_days, false);
}

}  // namespace rtkit
