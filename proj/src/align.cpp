#include <algorithm>

#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"
#include "rtkit/stats.hpp"

namespace rtkit {

AlignedTable align(const CountryPanel& panel, const MobilitySeries& mobility, const RtResult& rt) {
  const DatedSeries& mob = mobility.combined_smoothed;
  const DatedSeries cases = daily_increments(panel.fit_confirmed());
  const DatedSeries drt = change_rate(rt.rt);

  AlignedTable table;
  table.country = panel.country;
  if (rt.rt.empty() || mob.empty() || cases.empty()) {
    throw NoOverlap("nothing to align for '" + panel.country + "': an input series is empty");
  }
  const Date lo = std::max({rt.rt.start(), mob.start(), cases.start()});
  const Date hi = std::min({rt.rt.last(), mob.last(), cases.last()});
  if (hi < lo) throw NoOverlap("R_t, mobility and case dates do not overlap for '" + panel.country + "'");

  for (Date d = lo; d <= hi; d = add_days(d, 1)) {
    const auto r = rt.rt.at(d);
    const auto dr = drt.at(d);
    const auto m = mob.at(d);
    const auto c = cases.at(d);
    if (!r || !dr || !m || !c) {
      ++table.dropped;
      continue;
    }
    table.dates.push_back(d);
    table.rt.push_back(*r);
    table.drt_dt.push_back(*dr);
    table.mobility.push_back(*m);
    table.new_cases.push_back(*c);
  }
  return table;
}

}  // namespace rtkit
