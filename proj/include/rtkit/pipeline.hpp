#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rtkit/date.hpp"
#include "rtkit/model_free.hpp"
#include "rtkit/rt_estimator.hpp"
#include "rtkit/stats.hpp"

namespace rtkit {

enum class OutputFormat { kCsv, kJson };

/// Countries named in the original analysis; any list may be passed instead.
std::vector<std::string> default_countries();

/// Default download locations per feed.
std::map<std::string, std::vector<std::string>> default_feeds();

struct RunConfig {
  std::vector<std::string> countries = default_countries();
  std::filesystem::path data_dir;
  std::optional<Date> snapshot_date;
  Date end_date = make_date(2020, 12, 31);
  EstimatorConfig estimator;
  MfConfig mf;
  ShiftRange shifts;
  std::filesystem::path output_dir = "rtkit-out";
  OutputFormat format = OutputFormat::kCsv;
  /// Replaces the snapshot's UID lookup table as the population source.
  std::optional<std::filesystem::path> population_file;
  std::map<std::string, std::vector<std::string>> feeds = default_feeds();

  void validate() const;
};

/// Parses "lo..hi" (either bound may be negative).
ShiftRange parse_shift_range(std::string_view text);

/// Reads a JSON config file. Keys mirror RunConfig; missing keys keep defaults.
RunConfig load_run_config(const std::filesystem::path& file);
void apply_json(RunConfig& cfg, const std::string& json_text);

/// FNV-1a 64-bit digest of the analysis settings (paths excluded), as hex.
std::string config_hash(const RunConfig& cfg);

/// Filesystem-safe lowercase name for a country.
std::string country_slug(std::string_view country);

// Snapshots ----------------------------------------------------------------
//
// Layout under data_dir:
//   raw/<feed>/<ISO-date>/<original filename>
//   raw/manifests/<ISO-date>.json

struct SnapshotPaths {
  Date date{};
  std::filesystem::path confirmed;
  std::filesystem::path recovered;
  std::filesystem::path deaths;
  std::filesystem::path population;
  /// Empty when the snapshot has no mobility feed.
  std::filesystem::path mobility;
};

inline constexpr const char* kCsseFeed = "csse";
inline constexpr const char* kMobilityFeed = "apple";
inline constexpr const char* kConfirmedFile = "time_series_covid19_confirmed_global.csv";
inline constexpr const char* kRecoveredFile = "time_series_covid19_recovered_global.csv";
inline constexpr const char* kDeathsFile = "time_series_covid19_deaths_global.csv";
inline constexpr const char* kPopulationFile = "UID_ISO_FIPS_LookUp_Table.csv";

std::filesystem::path feed_dir(const std::filesystem::path& data_dir, std::string_view feed, Date snapshot);
std::filesystem::path manifest_path(const std::filesystem::path& data_dir, Date snapshot);

/// Resolves the requested snapshot, or the latest one when `date` is empty.
/// Throws IncompleteSnapshot if its manifest is marked incomplete or required
/// CSSE files are missing.
SnapshotPaths locate_snapshot(const std::filesystem::path& data_dir, std::optional<Date> date);

/// `explicit_dir` if set, otherwise $RTKIT_DATA_DIR, otherwise "data".
std::filesystem::path resolve_data_dir(const std::filesystem::path& explicit_dir);

// Commands -----------------------------------------------------------------
// Each returns the process exit code: 0 when every requested output was
// produced, 1 when some country or file failed, 2 when nothing could run.

struct FetchOptions {
  /// Snapshot directory date; today (UTC) when empty.
  std::optional<Date> snapshot_date;
  int timeout_seconds = 60;
};

int cmd_fetch(const RunConfig& cfg, std::ostream& log, const FetchOptions& opts = {});
int cmd_rt(const RunConfig& cfg, std::ostream& log);
int cmd_correlate(const RunConfig& cfg, std::ostream& log);

/// Tool version stamped into every output file.
const char* tool_version();

}  // namespace rtkit
