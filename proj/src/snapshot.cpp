#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rtkit/errors.hpp"
#include "rtkit/pipeline.hpp"

namespace fs = std::filesystem;

namespace rtkit {

fs::path feed_dir(const fs::path& data_dir, std::string_view feed, Date snapshot) {
  return data_dir / "raw" / std::string(feed) / format_iso_date(snapshot);
}

fs::path manifest_path(const fs::path& data_dir, Date snapshot) {
  return data_dir / "raw" / "manifests" / (format_iso_date(snapshot) + ".json");
}

namespace {

std::optional<Date> latest_snapshot(const fs::path& data_dir) {
  const fs::path root = data_dir / "raw" / kCsseFeed;
  std::optional<Date> best;
  if (!fs::is_directory(root)) return best;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const auto d = try_parse_iso_date(entry.path().filename().string());
    if (d && (!best || *d > *best)) best = d;
  }
  return best;
}

}  // namespace

SnapshotPaths locate_snapshot(const fs::path& data_dir, std::optional<Date> date) {
  if (!date) date = latest_snapshot(data_dir);
  if (!date) throw IncompleteSnapshot("no snapshot under " + (data_dir / "raw" / kCsseFeed).string());

  const fs::path manifest = manifest_path(data_dir, *date);
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      throw IncompleteSnapshot("unreadable manifest " + manifest.string());
    }
    if (!j.value("complete", false)) {
      throw IncompleteSnapshot("snapshot " + format_iso_date(*date) + " is marked incomplete; re-run `rtkit fetch`");
    }
  }

  SnapshotPaths paths;
  paths.date = *date;
  const fs::path csse = feed_dir(data_dir, kCsseFeed, *date);
  paths.confirmed = csse / kConfirmedFile;
  paths.recovered = csse / kRecoveredFile;
  paths.deaths = csse / kDeathsFile;
  paths.population = csse / kPopulationFile;
  for (const auto& p : {paths.confirmed, paths.recovered, paths.deaths, paths.population}) {
    if (!fs::is_regular_file(p)) throw IncompleteSnapshot("snapshot " + format_iso_date(*date) + " lacks " + p.string());
  }

  const fs::path apple = feed_dir(data_dir, kMobilityFeed, *date);
  if (fs::is_directory(apple)) {
    std::vector<fs::path> csvs;
    for (const auto& entry : fs::directory_iterator(apple)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") csvs.push_back(entry.path());
    }
    std::sort(csvs.begin(), csvs.end());
    if (!csvs.empty()) paths.mobility = csvs.front();
  }
  return paths;
}

}  // namespace rtkit
