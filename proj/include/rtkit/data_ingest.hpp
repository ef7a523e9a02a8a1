#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rtkit/dated_series.hpp"
#include "rtkit/panel.hpp"
#include "rtkit/rt_estimator.hpp"

namespace rtkit {

// Country names ------------------------------------------------------------

/// Canonical spelling used to match a country across feeds, e.g. "US",
/// "United States" and "USA" all map to "US"; unknown names are returned
/// with surrounding whitespace trimmed.
std::string canonical_country(std::string_view name);

bool same_country(std::string_view a, std::string_view b);

// CSSE time series ---------------------------------------------------------

/// Sums every row of a CSSE global time-series file whose Country/Region
/// matches `country`. Throws UnknownCountry, MalformedRow or DateGap.
DatedSeries parse_csse_series(const std::filesystem::path& file, std::string_view country);

/// Population of `country`. Accepts either the CSSE UID lookup table (uses the
/// country-level row, i.e. empty Province_State) or a two-column
/// `country,population` override file.
double parse_population(const std::filesystem::path& file, std::string_view country);

CountryPanel parse_csse(const std::filesystem::path& confirmed_file, const std::filesystem::path& recovered_file,
                        const std::filesystem::path& deaths_file, const std::filesystem::path& population_file,
                        std::string_view country);

// Smoothing ----------------------------------------------------------------

/// Trailing mean over `window` days. With `partial_prefix`, the first
/// window-1 dates carry the mean of the available prefix; otherwise they are
/// absent. A window touching an absent value yields absent.
DatedSeries trailing_mean(const DatedSeries& series, int window, bool partial_prefix);

/// Fills interior runs of at most `max_gap` absent values by linear
/// interpolation between the neighbouring present values.
DatedSeries interpolate_gaps(const DatedSeries& series, int max_gap);

/// Fills the panel's smoothed series with 3-day trailing means.
CountryPanel smooth_cases(CountryPanel panel);

/// Backward daily difference x(t) - x(t-1); the first date is absent.
DatedSeries daily_increments(const DatedSeries& cumulative);

// Apple mobility -----------------------------------------------------------

MobilitySeries parse_mobility(const std::filesystem::path& file, std::string_view country);

/// Builds combined and combined_smoothed from whichever streams are set.
void combine_streams(MobilitySeries& m, int max_gap = 3, int smoothing_days = 7);

// Alignment ----------------------------------------------------------------

/// Rows on which R_t, its change rate, smoothed mobility and daily new cases
/// are all present.
struct AlignedTable {
  std::string country;
  std::vector<Date> dates;
  std::vector<double> rt;
  std::vector<double> drt_dt;
  std::vector<double> mobility;
  std::vector<double> new_cases;
  /// Rows inside the overlapping range dropped for an absent column.
  std::size_t dropped = 0;

  std::size_t rows() const noexcept { return dates.size(); }
};

/// Throws NoOverlap when R_t, mobility and cases share no date.
AlignedTable align(const CountryPanel& panel, const MobilitySeries& mobility, const RtResult& rt);

}  // namespace rtkit
