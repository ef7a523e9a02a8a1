#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>

#include "rtkit/data_ingest.hpp"

namespace rtkit {
namespace {

std::string normalize_key(std::string_view name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

// Aliases seen across the CSSE and Apple feeds, keyed by normalize_key().
constexpr std::array<std::pair<std::string_view, std::string_view>, 22> kAliases{{
    {"us", "US"},
    {"usa", "US"},
    {"unitedstates", "US"},
    {"unitedstatesofamerica", "US"},
    {"uk", "United Kingdom"},
    {"unitedkingdom", "United Kingdom"},
    {"greatbritain", "United Kingdom"},
    {"koreasouth", "Korea, South"},
    {"southkorea", "Korea, South"},
    {"republicofkorea", "Korea, South"},
    {"korearepublicof", "Korea, South"},
    {"czechia", "Czechia"},
    {"czechrepublic", "Czechia"},
    {"taiwan", "Taiwan"},
    {"russia", "Russia"},
    {"russianfederation", "Russia"},
    {"macao", "Macao"},
    {"macau", "Macao"},
    {"burma", "Burma"},
    {"myanmar", "Burma"},
    {"turkey", "Turkey"},
    {"turkiye", "Turkey"},
}};

}  // namespace

std::string canonical_country(std::string_view name) {
  const std::string key = normalize_key(name);
  for (const auto& [alias, canonical] : kAliases) {
    if (alias == key) return std::string(canonical);
  }
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.remove_prefix(1);
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
  return std::string(name);
}

bool same_country(std::string_view a, std::string_view b) {
  return normalize_key(canonical_country(a)) == normalize_key(canonical_country(b));
}

}  // namespace rtkit
