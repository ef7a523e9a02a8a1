#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"
#include "rtkit/pipeline.hpp"

#ifndef RTKIT_VERSION
#define RTKIT_VERSION "0.0.0"
#endif

namespace rtkit {

using nlohmann::json;

const char* tool_version() { return RTKIT_VERSION; }

std::vector<std::string> default_countries() {
  return {"US", "United Kingdom", "Sweden", "Japan", "India", "Brazil",
          "Israel", "Korea, South", "Italy", "Germany", "Spain"};
}

std::map<std::string, std::vector<std::string>> default_feeds() {
  const std::string csse =
      "https://raw.githubusercontent.com/CSSEGISandData/COVID-19/master/csse_covid_19_data/";
  return {
      {kCsseFeed,
       {csse + "csse_covid_19_time_series/" + kConfirmedFile, csse + "csse_covid_19_time_series/" + kRecoveredFile,
        csse + "csse_covid_19_time_series/" + kDeathsFile, csse + kPopulationFile}},
      // Apple withdrew the original feed; this mirror keeps the final release.
      {kMobilityFeed,
       {"https://raw.githubusercontent.com/ActiveConclusion/COVID19_mobility/master/apple_reports/"
        "applemobilitytrends.csv"}},
  };
}

void RunConfig::validate() const {
  if (countries.empty()) throw InvalidArgument("no countries requested");
  estimator.validate();
  mf.validate();
  if (shifts.lo > shifts.hi) throw InvalidArgument("shift range is empty");
}

ShiftRange parse_shift_range(std::string_view text) {
  const auto dots = text.find("..");
  auto parse = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw InvalidArgument("bad shift range '" + std::string(text) + "', expected lo..hi");
    }
    return v;
  };
  if (dots == std::string_view::npos) throw InvalidArgument("bad shift range '" + std::string(text) + "', expected lo..hi");
  ShiftRange r{parse(text.substr(0, dots)), parse(text.substr(dots + 2))};
  if (r.lo > r.hi) throw InvalidArgument("shift range '" + std::string(text) + "' is empty");
  return r;
}

namespace {

json analysis_json(const RunConfig& cfg) {
  const auto& e = cfg.estimator;
  json j;
  j["countries"] = cfg.countries;
  j["snapshot_date"] = cfg.snapshot_date ? json(format_iso_date(*cfg.snapshot_date)) : json(nullptr);
  j["end_date"] = format_iso_date(cfg.end_date);
  j["estimator"] = {{"window_days", e.window_days},
                    {"case_threshold", e.case_threshold},
                    {"incubation_shift_days", e.incubation_shift_days},
                    {"asymptomatic_fraction", e.asymptomatic_fraction},
                    {"gamma", e.gamma},
                    {"k", e.k},
                    {"active_infected_init", e.active_infected_init},
                    {"substeps_per_day", e.substeps_per_day},
                    {"beta_lower", e.minimizer.lower_bound},
                    {"beta_upper", e.minimizer.upper_bound},
                    {"x_tolerance", e.minimizer.x_tolerance},
                    {"max_iterations", e.minimizer.max_iterations}};
  j["model_free"] = {{"numerator_days", cfg.mf.numerator_days},
                     {"denominator_days", cfg.mf.denominator_days},
                     {"use_raw_cases", cfg.mf.use_raw_cases}};
  j["shifts"] = std::to_string(cfg.shifts.lo) + ".." + std::to_string(cfg.shifts.hi);
  j["format"] = cfg.format == OutputFormat::kJson ? "json" : "csv";
  return j;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

void apply_json(RunConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    read(j, "countries", cfg.countries);
    if (j.contains("data_dir")) cfg.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("population_file") && !j.at("population_file").is_null()) {
      cfg.population_file = j.at("population_file").get<std::string>();
    }
    if (j.contains("snapshot_date") && !j.at("snapshot_date").is_null()) {
      cfg.snapshot_date = parse_iso_date(j.at("snapshot_date").get<std::string>());
    }
    if (j.contains("end_date")) cfg.end_date = parse_iso_date(j.at("end_date").get<std::string>());
    if (j.contains("shifts")) cfg.shifts = parse_shift_range(j.at("shifts").get<std::string>());
    if (j.contains("format")) {
      const auto f = j.at("format").get<std::string>();
      if (f == "csv") {
        cfg.format = OutputFormat::kCsv;
      } else if (f == "json") {
        cfg.format = OutputFormat::kJson;
      } else {
        throw InvalidArgument("format must be csv or json");
      }
    }
    if (j.contains("estimator")) {
      const json& e = j.at("estimator");
      auto& c = cfg.estimator;
      read(e, "window_days", c.window_days);
      read(e, "case_threshold", c.case_threshold);
      read(e, "incubation_shift_days", c.incubation_shift_days);
      read(e, "asymptomatic_fraction", c.asymptomatic_fraction);
      read(e, "gamma", c.gamma);
      read(e, "k", c.k);
      read(e, "active_infected_init", c.active_infected_init);
      read(e, "substeps_per_day", c.substeps_per_day);
      read(e, "beta_lower", c.minimizer.lower_bound);
      read(e, "beta_upper", c.minimizer.upper_bound);
      read(e, "x_tolerance", c.minimizer.x_tolerance);
      read(e, "max_iterations", c.minimizer.max_iterations);
    }
    if (j.contains("model_free")) {
      const json& m = j.at("model_free");
      read(m, "numerator_days", cfg.mf.numerator_days);
      read(m, "denominator_days", cfg.mf.denominator_days);
      read(m, "use_raw_cases", cfg.mf.use_raw_cases);
    }
    if (j.contains("feeds")) {
      for (const auto& [feed, urls] : j.at("feeds").items()) cfg.feeds[feed] = urls.get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot read config " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg;
  apply_json(cfg, ss.str());
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = analysis_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string country_slug(std::string_view country) {
  std::string out;
  for (char c : canonical_country(country)) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (!out.empty() && out.back() != '_') {
      out.push_back('_');
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "country" : out;
}

std::filesystem::path resolve_data_dir(const std::filesystem::path& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("RTKIT_DATA_DIR"); env && *env) return env;
  return "data";
}

}  // namespace rtkit
