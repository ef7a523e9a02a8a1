#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rtkit/errors.hpp"
#include "rtkit/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string countries;
  std::string end_date;
  std::string shifts;
  std::string output_dir;
  std::string format;
  std::string snapshot;
  std::string data_dir;
  int timeout = 60;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--countries", f.countries, "Comma-separated country names");
  cmd->add_option("--end-date", f.end_date, "Last date to analyse (ISO)");
  cmd->add_option("--shifts", f.shifts, "Shift range lo..hi in days");
  cmd->add_option("--output-dir", f.output_dir, "Where result files go");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--snapshot", f.snapshot, "Snapshot date (ISO); latest if omitted");
  cmd->add_option("--data-dir", f.data_dir, "Snapshot root (default $RTKIT_DATA_DIR, then ./data)");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

rtkit::RunConfig build_config(const Flags& f) {
  rtkit::RunConfig cfg = f.config.empty() ? rtkit::RunConfig{} : rtkit::load_run_config(f.config);
  if (!f.countries.empty()) cfg.countries = split_list(f.countries);
  if (!f.end_date.empty()) cfg.end_date = rtkit::parse_iso_date(f.end_date);
  if (!f.shifts.empty()) cfg.shifts = rtkit::parse_shift_range(f.shifts);
  if (!f.output_dir.empty()) cfg.output_dir = f.output_dir;
  if (f.format == "json") cfg.format = rtkit::OutputFormat::kJson;
  if (f.format == "csv") cfg.format = rtkit::OutputFormat::kCsv;
  if (!f.snapshot.empty()) cfg.snapshot_date = rtkit::parse_iso_date(f.snapshot);
  if (!f.data_dir.empty()) cfg.data_dir = f.data_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective reproduction number and mobility correlation toolkit"};
  app.set_version_flag("--version", rtkit::tool_version());
  app.require_subcommand(1);

  Flags flags;
  auto* fetch = app.add_subcommand("fetch", "Download a dated snapshot of the source feeds");
  auto* rt = app.add_subcommand("rt", "Estimate R_t per country");
  auto* correlate = app.add_subcommand("correlate", "Correlate R_t with mobility per country");
  for (auto* cmd : {fetch, rt, correlate}) add_flags(cmd, flags);
  fetch->add_option("--timeout", flags.timeout, "Per-request timeout in seconds")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const rtkit::RunConfig cfg = build_config(flags);
    if (fetch->parsed()) {
      rtkit::FetchOptions opts;
      opts.snapshot_date = cfg.snapshot_date;
      opts.timeout_seconds = flags.timeout;
      return rtkit::cmd_fetch(cfg, std::cerr, opts);
    }
    if (rt->parsed()) return rtkit::cmd_rt(cfg, std::cerr);
    return rtkit::cmd_correlate(cfg, std::cerr);
  } catch (const rtkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
