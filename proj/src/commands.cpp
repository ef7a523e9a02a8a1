#include <algorithm>
#include <cmath>

#include "rtkit/data_ingest.hpp"
#include "rtkit/errors.hpp"
#include "rtkit/pipeline.hpp"
#include "rtkit/table.hpp"

namespace fs = std::filesystem;

namespace rtkit {
namespace {

struct CountryRun {
  CountryPanel panel;
  RtResult rt;
};

CountryRun run_country(const RunConfig& cfg, const SnapshotPaths& snap, const std::string& country) {
  CountryRun run;
  run.panel = smooth_cases(parse_csse(snap.confirmed, snap.recovered, snap.deaths,
                                      cfg.population_file.value_or(snap.population), country));
  run.rt = estimate_rt(run.panel, cfg.estimator, cfg.end_date);
  return run;
}

std::vector<std::pair<std::string, std::string>> base_metadata(const RunConfig& cfg, const SnapshotPaths& snap) {
  return {{"tool", "rtkit"},
          {"version", tool_version()},
          {"config_hash", config_hash(cfg)},
          {"snapshot", format_iso_date(snap.date)}};
}

void write_table(const RunConfig& cfg, const std::string& basename, const Table& table) {
  if (cfg.format == OutputFormat::kJson) {
    write_file_atomic(cfg.output_dir / (basename + ".json"), to_json(table));
  } else {
    write_file_atomic(cfg.output_dir / (basename + ".csv"), to_csv(table));
  }
}

std::optional<double> median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> present(const DatedSeries& s) {
  std::vector<double> out;
  for (const auto& v : s.values()) {
    if (v) out.push_back(*v);
  }
  return out;
}

DatedSeries clamped_increments(const DatedSeries& cumulative) {
  DatedSeries inc = daily_increments(cumulative);
  std::vector<DatedSeries::Value> out = inc.values();
  for (auto& v : out) {
    if (v && *v < 0.0) v = 0.0;
  }
  return DatedSeries(inc.start(), std::move(out));
}

Table rt_table(const RunConfig& cfg, const SnapshotPaths& snap, const CountryRun& run) {
  const CountryPanel& p = run.panel;
  const Date last = std::min(cfg.end_date, p.confirmed.last());
  const DatedSeries cases = clamped_increments(p.fit_confirmed());
  const DatedSeries mf_input = cfg.mf.use_raw_cases ? clamped_increments(p.confirmed) : cases;
  const ModelFreeResult mf = rt_model_free(mf_input, cfg.mf);

  std::vector<Date> dates;
  std::vector<std::optional<double>> days, rt, rt_mf, per_million, converged;
  for (Date d = run.rt.t0; d <= last; d = add_days(d, 1)) {
    dates.push_back(d);
    days.emplace_back(static_cast<double>(days_between(run.rt.t0, d)));
    rt.push_back(run.rt.rt.at(d));
    rt_mf.push_back(mf.rt.at(d));
    const auto c = cases.at(d);
    per_million.push_back(c ? std::optional<double>(*c * 1e6 / p.population) : std::nullopt);
    converged.push_back(run.rt.converged.at(d));
  }

  Table t;
  t.metadata = base_metadata(cfg, snap);
  t.metadata.emplace_back("country", p.country);
  t.metadata.emplace_back("population", format_real(p.population));
  t.metadata.emplace_back("t0", format_iso_date(run.rt.t0));
  t.metadata.emplace_back("rt_mf_zero_denominator_days", std::to_string(mf.zero_denominator_days));
  t.columns.push_back(Column::dates("date", dates));
  t.columns.push_back(Column::integers("days_since_t0", days));
  t.columns.push_back(Column::reals("rt_seir", rt));
  t.columns.push_back(Column::reals("rt_mf", rt_mf));
  t.columns.push_back(Column::reals("daily_new_cases_per_million", per_million, 3));
  t.columns.push_back(Column::integers("converged", converged));
  return t;
}

std::optional<SnapshotPaths> open_snapshot(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    return locate_snapshot(resolve_data_dir(cfg.data_dir), cfg.snapshot_date);
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int cmd_rt(const RunConfig& cfg, std::ostream& log) {
  const auto snap = open_snapshot(cfg, log);
  if (!snap) return 2;

  int failures = 0;
  for (const auto& country : cfg.countries) {
    try {
      const CountryRun run = run_country(cfg, *snap, country);
      for (const auto& msg : run.rt.diagnostics) log << country << ": " << msg << "\n";
      write_table(cfg, "rt_" + country_slug(country), rt_table(cfg, *snap, run));
      log << country << ": " << run.rt.rt.present_count() << " R_t estimates from t0 " << format_iso_date(run.rt.t0)
          << "\n";
    } catch (const Error& e) {
      ++failures;
      log << country << ": failed: " << e.what() << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}

int cmd_correlate(const RunConfig& cfg, std::ostream& log) {
  const auto snap = open_snapshot(cfg, log);
  if (!snap) return 2;

  std::vector<std::string> s_country, s_status, s_reason, s_sign;
  std::vector<std::optional<double>> s_rt_mob, s_drt_mob, s_rt_drt, s_nobs, s_peak_shift, s_peak_r, s_first_rt,
      s_median_rt;
  int failures = 0, negative = 0, defined = 0;

  auto add_row = [&](const std::string& country, const std::string& status, const std::string& reason) {
    s_country.push_back(canonical_country(country));
    s_status.push_back(status);
    s_reason.push_back(reason);
    s_sign.emplace_back("absent");
    for (auto* col : {&s_rt_mob, &s_drt_mob, &s_rt_drt, &s_nobs, &s_peak_shift, &s_peak_r, &s_first_rt, &s_median_rt}) {
      col->emplace_back(std::nullopt);
    }
  };

  for (const auto& country : cfg.countries) {
    CountryRun run;
    try {
      run = run_country(cfg, *snap, country);
    } catch (const Error& e) {
      ++failures;
      log << country << ": failed: " << e.what() << "\n";
      add_row(country, "failed", e.what());
      continue;
    }

    MobilitySeries mobility;
    try {
      if (snap->mobility.empty()) throw NoStreams("snapshot has no mobility feed");
      mobility = parse_mobility(snap->mobility, country);
    } catch (const Error& e) {
      ++failures;
      log << country << ": skipped: " << e.what() << "\n";
      add_row(country, "skipped", e.what());
      continue;
    }

    try {
      const AlignedTable aligned = align(run.panel, mobility, run.rt);
      const CorrelationReport report = correlation_matrix(aligned);
      const ShiftSweep sweep = shift_sweep(run.rt.rt, mobility.combined_smoothed, cfg.shifts);

      Table corr;
      corr.metadata = base_metadata(cfg, *snap);
      corr.metadata.emplace_back("country", run.panel.country);
      corr.metadata.emplace_back("period", format_iso_date(report.first) + ".." + format_iso_date(report.last));
      corr.metadata.emplace_back("dropped_rows", std::to_string(aligned.dropped));
      std::vector<std::string> names(kVariableNames.begin(), kVariableNames.end());
      corr.columns.push_back(Column::texts("variable", names));
      for (int j = 0; j < 3; ++j) {
        std::vector<std::optional<double>> cells;
        for (int i = 0; i < 3; ++i) cells.push_back(report.cell(static_cast<Variable>(i), static_cast<Variable>(j)));
        corr.columns.push_back(Column::reals(kVariableNames[static_cast<std::size_t>(j)], cells));
      }
      corr.columns.push_back(Column::integers("n_obs", std::vector<std::optional<double>>(3, static_cast<double>(aligned.rows()))));
      write_table(cfg, "corr_" + country_slug(country), corr);

      Table shifts;
      shifts.metadata = base_metadata(cfg, *snap);
      shifts.metadata.emplace_back("country", run.panel.country);
      shifts.metadata.emplace_back("shift_convention", "shift s pairs rt(t) with mobility(t - s); positive s = mobility leads");
      std::vector<std::optional<double>> shift_col, n_col;
      for (std::size_t i = 0; i < sweep.shifts.size(); ++i) {
        shift_col.emplace_back(static_cast<double>(sweep.shifts[i]));
        n_col.emplace_back(static_cast<double>(sweep.n_obs[i]));
      }
      shifts.columns.push_back(Column::integers("shift", shift_col));
      shifts.columns.push_back(Column::reals("r_s", sweep.r_s));
      shifts.columns.push_back(Column::integers("n_obs", n_col));
      write_table(cfg, "shift_" + country_slug(country), shifts);

      add_row(country, "ok", "");
      const auto rm = report.cell(Variable::kRt, Variable::kMobility);
      s_rt_mob.back() = rm;
      s_drt_mob.back() = report.cell(Variable::kRtChangeRate, Variable::kMobility);
      s_rt_drt.back() = report.cell(Variable::kRt, Variable::kRtChangeRate);
      s_nobs.back() = static_cast<double>(aligned.rows());
      if (const auto p = sweep.peak()) {
        s_peak_shift.back() = static_cast<double>(sweep.shifts[*p]);
        s_peak_r.back() = sweep.r_s[*p];
      }
      const auto rts = present(run.rt.rt);
      if (!rts.empty()) s_first_rt.back() = rts.front();
      s_median_rt.back() = median(rts);
      if (rm) {
        ++defined;
        if (*rm < 0.0) ++negative;
        s_sign.back() = *rm < 0.0 ? "negative" : (*rm > 0.0 ? "positive" : "zero");
      }
      log << country << ": rt-mobility r_s " << (rm ? format_real(*rm) : "absent") << " over " << aligned.rows()
          << " days\n";
    } catch (const Error& e) {
      ++failures;
      log << country << ": failed: " << e.what() << "\n";
      add_row(country, "failed", e.what());
    }
  }

  Table summary;
  summary.metadata = base_metadata(cfg, *snap);
  summary.metadata.emplace_back("negative_rt_mobility", std::to_string(negative) + " of " + std::to_string(defined));
  summary.columns.push_back(Column::texts("country", s_country));
  summary.columns.push_back(Column::texts("status", s_status));
  summary.columns.push_back(Column::texts("reason", s_reason));
  summary.columns.push_back(Column::reals("r_rt_mobility", s_rt_mob));
  summary.columns.push_back(Column::reals("r_drt_mobility", s_drt_mob));
  summary.columns.push_back(Column::reals("r_rt_drt", s_rt_drt));
  summary.columns.push_back(Column::texts("rt_mobility_sign", s_sign));
  summary.columns.push_back(Column::integers("n_obs", s_nobs));
  summary.columns.push_back(Column::integers("peak_shift", s_peak_shift));
  summary.columns.push_back(Column::reals("peak_r_s", s_peak_r));
  summary.columns.push_back(Column::reals("first_rt", s_first_rt));
  summary.columns.push_back(Column::reals("median_rt", s_median_rt));
  write_table(cfg, "summary", summary);
  log << "rt-mobility correlation negative for " << negative << " of " << defined << " countries\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace rtkit
