#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"
#include "rtkit/pipeline.hpp"
#include "rtkit/table.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace rtkit;

namespace {

const Date kStart = make_date(2020, 1, 22);
const Date kSnapshot = make_date(2020, 9, 1);

/// Three SEIR countries; Zeroland never crosses the case threshold and
/// Deltaland has no mobility rows.
const fs::path& snapshot_dir() {
  static const fs::path dir = [] {
    const fs::path d = testing::scratch_dir("cli-data");
    std::vector<CountryPanel> panels;
    panels.push_back(testing::seir_panel([](int t) { return t < 50 ? 0.3 : 0.07; }, 200, testing::seed_state(5e6, 20, 10),
                                         kStart, "Alphaland"));
    panels.push_back(testing::seir_panel([](int t) { return t < 40 ? 0.25 : 0.06; }, 200, testing::seed_state(3e6, 20, 10),
                                         kStart, "Deltaland"));
    panels.push_back(testing::seir_panel([](int) { return 0.3; }, 200, testing::seed_state(1e6, 0, 0), kStart, "Zeroland"));
    testing::SyntheticMobility m{"Alphaland", {}, {}, {}};
    for (int i = 0; i < 200; ++i) {
      const double level = i < 50 ? 100.0 : 50.0 + 0.2 * (i - 50);
      m.driving.set(add_days(kStart, i), level + 5.0 * std::sin(i));
      m.walking.set(add_days(kStart, i), level - 5.0 * std::cos(i));
    }
    testing::write_snapshot(d, kSnapshot, panels, {m});
    return d;
  }();
  return dir;
}

RunConfig config_for(const std::vector<std::string>& countries, const std::string& tag) {
  RunConfig cfg;
  cfg.countries = countries;
  cfg.data_dir = snapshot_dir();
  cfg.output_dir = testing::scratch_dir(tag);
  return cfg;
}

int run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(RTKIT_CLI_PATH) + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("shift ranges") {
    CHECK(parse_shift_range("-21..21").lo == -21);
    CHECK(parse_shift_range("-21..21").hi == 21);
    CHECK(parse_shift_range("3..3").lo == 3);
    for (const char* bad : {"", "5", "1..", "..2", "a..b", "5..1", "1...2"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_shift_range(bad), InvalidArgument);
    }
  }

  TEST_CASE("defaults") {
    const RunConfig cfg;
    CHECK(cfg.countries.size() == 11);
    CHECK(cfg.shifts.lo == -21);
    CHECK(cfg.shifts.hi == 21);
    CHECK(cfg.end_date == make_date(2020, 12, 31));
    CHECK(cfg.format == OutputFormat::kCsv);
    CHECK(cfg.feeds.count(kCsseFeed) == 1);
    CHECK(cfg.feeds.count(kMobilityFeed) == 1);
  }

  TEST_CASE("json config") {
    RunConfig cfg;
    apply_json(cfg, R"({"countries": ["Sweden"], "end_date": "2020-06-30", "shifts": "-7..7", "format": "json",
                        "estimator": {"window_days": 9, "active_infected_init": true},
                        "model_free": {"use_raw_cases": true}})");
    CHECK(cfg.countries == std::vector<std::string>{"Sweden"});
    CHECK(cfg.end_date == make_date(2020, 6, 30));
    CHECK(cfg.shifts.lo == -7);
    CHECK(cfg.format == OutputFormat::kJson);
    CHECK(cfg.estimator.window_days == 9);
    CHECK(cfg.estimator.active_infected_init);
    CHECK(cfg.mf.use_raw_cases);
    CHECK_THROWS_AS(apply_json(cfg, "{"), InvalidArgument);
    CHECK_THROWS_AS(apply_json(cfg, R"({"format": "xml"})"), InvalidArgument);
    CHECK_THROWS_AS(apply_json(cfg, R"({"countries": 3})"), InvalidArgument);

    const fs::path file = testing::scratch_dir("cfg") / "c.json";
    std::ofstream(file) << R"({"countries": ["Norway", "Denmark"]})";
    CHECK(load_run_config(file).countries.size() == 2);
    CHECK_THROWS_AS(load_run_config(file.parent_path() / "absent.json"), InvalidArgument);
  }

  TEST_CASE("config hash") {
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.output_dir = "elsewhere";
    b.data_dir = "other";
    CHECK(config_hash(a) == config_hash(b));
    b.estimator.window_days = 8;
    CHECK(config_hash(a) != config_hash(b));
  }

  TEST_CASE("country slugs") {
    CHECK(country_slug("Korea, South") == "korea_south");
    CHECK(country_slug("United States") == "us");
    CHECK(country_slug("Sweden") == "sweden");
  }

  TEST_CASE("rt output matches the library estimate") {
    const RunConfig cfg = config_for({"Alphaland"}, "cli-rt");
    std::ostringstream log;
    REQUIRE(cmd_rt(cfg, log) == 0);
    const Table t = read_table_csv(cfg.output_dir / "rt_alphaland.csv");

    const SnapshotPaths snap = locate_snapshot(cfg.data_dir, std::nullopt);
    CHECK(snap.date == kSnapshot);
    const CountryPanel panel = smooth_cases(parse_csse(snap.confirmed, snap.recovered, snap.deaths, snap.population, "Alphaland"));
    const RtResult rt = estimate_rt(panel, cfg.estimator, cfg.end_date);

    CHECK(t.meta("country") == "Alphaland");
    CHECK(t.meta("t0") == format_iso_date(rt.t0));
    CHECK(t.meta("config_hash") == config_hash(cfg));
    CHECK(t.meta("snapshot") == "2020-09-01");
    const DatedSeries seir = table_series(t, "rt_seir");
    CHECK(seir.start() == rt.t0);
    CHECK(seir.slice(rt.rt.start(), rt.rt.end()) == rt.rt);
    CHECK(*t.column("days_since_t0").numbers.front() == 0.0);
    CHECK(seir.last() == panel.confirmed.last());

    const DatedSeries per_million = table_series(t, "daily_new_cases_per_million");
    for (std::size_t i = 0; i < per_million.size(); ++i) {
      const Date d = per_million.date_at(i);
      const double expect = std::max(0.0, panel.confirmed_smoothed.value(d) - panel.confirmed_smoothed.value(add_days(d, -1))) *
                            1e6 / panel.population;
      CHECK(std::abs(*per_million[i] - expect) <= 5e-4);
    }
  }

  TEST_CASE("a failing country is reported but does not block the rest") {
    const RunConfig cfg = config_for({"Alphaland", "Zeroland", "Atlantis"}, "cli-fail");
    std::ostringstream log;
    CHECK(cmd_rt(cfg, log) == 1);
    CHECK(fs::exists(cfg.output_dir / "rt_alphaland.csv"));
    CHECK_FALSE(fs::exists(cfg.output_dir / "rt_zeroland.csv"));
    CHECK(log.str().find("Zeroland: failed") != std::string::npos);
    CHECK(log.str().find("Atlantis: failed") != std::string::npos);
  }

  TEST_CASE("correlate writes matrices, sweeps and a summary") {
    RunConfig cfg = config_for({"Alphaland", "Deltaland", "Zeroland"}, "cli-corr");
    cfg.shifts = {-5, 5};
    std::ostringstream log;
    CHECK(cmd_correlate(cfg, log) == 1);

    const Table corr = read_table_csv(cfg.output_dir / "corr_alphaland.csv");
    CHECK(corr.column("variable").text == std::vector<std::string>{"rt", "drt_dt", "mobility"});
    for (const char* col : {"rt", "drt_dt", "mobility"}) {
      for (const auto& v : corr.column(col).numbers) {
        REQUIRE(v.has_value());
        CHECK(std::abs(*v) <= 1.0);
      }
    }
    CHECK(*corr.column("rt").numbers[0] == 1.0);
    CHECK(*corr.column("mobility").numbers[0] == *corr.column("rt").numbers[2]);

    const Table shifts = read_table_csv(cfg.output_dir / "shift_alphaland.csv");
    CHECK(shifts.rows() == 11);
    CHECK(shifts.meta("shift_convention").has_value());
    CHECK(*shifts.column("r_s").numbers[5] == *corr.column("mobility").numbers[0]);
    CHECK_FALSE(fs::exists(cfg.output_dir / "corr_deltaland.csv"));

    const Table summary = read_table_csv(cfg.output_dir / "summary.csv");
    CHECK(summary.column("country").text == std::vector<std::string>{"Alphaland", "Deltaland", "Zeroland"});
    CHECK(summary.column("status").text == std::vector<std::string>{"ok", "skipped", "failed"});
    CHECK(summary.column("n_obs").numbers[0] == corr.column("n_obs").numbers[0]);
    const std::string sign = summary.column("rt_mobility_sign").text[0];
    CHECK(summary.meta("negative_rt_mobility") == std::string(sign == "negative" ? "1" : "0") + " of 1");
  }

  TEST_CASE("output is deterministic in both formats") {
    for (auto format : {OutputFormat::kCsv, OutputFormat::kJson}) {
      RunConfig a = config_for({"Alphaland"}, "cli-det-a"), b = config_for({"Alphaland"}, "cli-det-b");
      a.format = b.format = format;
      std::ostringstream log;
      cmd_correlate(a, log);
      cmd_correlate(b, log);
      const std::string ext = format == OutputFormat::kJson ? ".json" : ".csv";
      for (const char* name : {"corr_alphaland", "shift_alphaland", "summary"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(a.output_dir / (name + ext)));
        CHECK(testing::read_file(a.output_dir / (name + ext)) == testing::read_file(b.output_dir / (name + ext)));
      }
    }
  }

  TEST_CASE("incomplete or missing snapshots are refused") {
    const fs::path d = testing::scratch_dir("cli-incomplete");
    testing::write_snapshot(d, kSnapshot,
                            {testing::seir_panel([](int) { return 0.3; }, 60, testing::seed_state(1e6), kStart, "Alphaland")},
                            {}, false);
    RunConfig cfg = config_for({"Alphaland"}, "cli-incomplete-out");
    cfg.data_dir = d;
    std::ostringstream log;
    CHECK(cmd_rt(cfg, log) == 2);
    CHECK(log.str().find("incomplete") != std::string::npos);
    CHECK_THROWS_AS(locate_snapshot(d, std::nullopt), IncompleteSnapshot);
    cfg.data_dir = testing::scratch_dir("cli-empty");
    CHECK(cmd_correlate(cfg, log) == 2);
    cfg.data_dir = snapshot_dir();
    cfg.snapshot_date = make_date(2020, 8, 1);
    CHECK(cmd_rt(cfg, log) == 2);
  }

  TEST_CASE("binary exit codes") {
    const std::string data = "\"" + snapshot_dir().string() + "\"";
    const std::string out = "\"" + testing::scratch_dir("cli-bin").string() + "\"";
    CHECK(run_binary("--version") == 0);
    CHECK(run_binary("--help") == 0);
    CHECK(run_binary("") == 2);
    CHECK(run_binary("rt --bogus") == 2);
    CHECK(run_binary("rt --format xml") == 2);
    CHECK(run_binary("rt --shifts 5..1 --data-dir " + data) == 2);
    CHECK(run_binary("rt --countries Alphaland --data-dir " + data + " --output-dir " + out) == 0);
    CHECK(run_binary("rt --countries Alphaland,Zeroland --data-dir " + data + " --output-dir " + out) == 1);
    CHECK(run_binary("correlate --countries Alphaland --shifts -3..3 --format json --data-dir " + data + " --output-dir " + out) ==
          0);
  }

  TEST_CASE("data directory from the environment") {
    const fs::path out = testing::scratch_dir("cli-env");
    CHECK(run_binary("rt --countries Alphaland --output-dir \"" + out.string() + "\"",
                     "RTKIT_DATA_DIR=\"" + snapshot_dir().string() + "\"") == 0);
    CHECK(fs::exists(out / "rt_alphaland.csv"));
    CHECK(run_binary("rt --countries Alphaland --output-dir \"" + out.string() + "\"",
                     "RTKIT_DATA_DIR=\"" + testing::scratch_dir("cli-env-empty").string() + "\"") == 2);
  }
}
