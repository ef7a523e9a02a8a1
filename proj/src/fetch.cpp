#include <chrono>
#include <ctime>

#include <nlohmann/json.hpp>

#include "rtkit/errors.hpp"
#include "rtkit/pipeline.hpp"
#include "rtkit/table.hpp"

// After Eigen: httplib pulls in <resolv.h>, whose `_res` macro breaks Eigen headers.
#include <httplib.h>

namespace fs = std::filesystem;

namespace rtkit {
namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // includes query
  std::string filename;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InvalidArgument("not an absolute URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Url u;
  u.origin = url.substr(0, path_start);
  u.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  std::string bare = u.path.substr(0, u.path.find_first_of("?#"));
  u.filename = bare.substr(bare.find_last_of('/') + 1);
  if (u.filename.empty()) throw InvalidArgument("URL has no file name: " + url);
  return u;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Date utc_today() { return std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()); }

}  // namespace

int cmd_fetch(const RunConfig& cfg, std::ostream& log, const FetchOptions& opts) {
  const fs::path data_dir = resolve_data_dir(cfg.data_dir);
  const Date snapshot = opts.snapshot_date.value_or(cfg.snapshot_date.value_or(utc_today()));

  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  bool complete = true;
  for (const char* feed : {kCsseFeed, kMobilityFeed}) {
    const auto it = cfg.feeds.find(feed);
    if (it == cfg.feeds.end() || it->second.empty()) {
      log << "fetch: no URL configured for feed '" << feed << "'\n";
      complete = false;
      files.push_back({{"feed", feed}, {"ok", false}, {"error", "no URL configured"}});
      continue;
    }
    for (const auto& url : it->second) {
      nlohmann::ordered_json entry{{"feed", feed}, {"url", url}};
      try {
        const Url u = split_url(url);
        httplib::Client client(u.origin);
        client.set_follow_location(true);
        client.set_connection_timeout(opts.timeout_seconds, 0);
        client.set_read_timeout(opts.timeout_seconds, 0);
        const auto res = client.Get(u.path);
        if (!res) throw Error("request failed: " + httplib::to_string(res.error()));
        if (res->status != 200) throw Error("HTTP status " + std::to_string(res->status));

        const fs::path target = feed_dir(data_dir, feed, snapshot) / u.filename;
        write_file_atomic(target, res->body);
        entry["path"] = fs::relative(target, data_dir).generic_string();
        entry["size"] = res->body.size();
        entry["ok"] = true;
        log << "fetch: " << url << " -> " << target.string() << " (" << res->body.size() << " bytes)\n";
      } catch (const std::exception& e) {
        complete = false;
        entry["ok"] = false;
        entry["error"] = e.what();
        log << "fetch: " << url << " failed: " << e.what() << "\n";
      }
      files.push_back(std::move(entry));
    }
  }

  nlohmann::ordered_json manifest{{"tool", "rtkit"},
                                  {"version", tool_version()},
                                  {"snapshot_date", format_iso_date(snapshot)},
                                  {"retrieved_at", utc_timestamp()},
                                  {"complete", complete},
                                  {"files", files}};
  write_file_atomic(manifest_path(data_dir, snapshot), manifest.dump(2) + "\n");
  if (!complete) log << "fetch: snapshot " << format_iso_date(snapshot) << " is incomplete\n";
  return complete ? 0 : 1;
}

}  // namespace rtkit
