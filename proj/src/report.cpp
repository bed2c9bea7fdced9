#include "kmc/report.hpp"

#include <fmt/format.h>

namespace kmc {

Json CheckReport::to_json(bool timing) const {
  Json j;
  j["check"] = check;
  j["params"] = params;
  j["verdict"] = pass ? "pass" : "fail";
  if (!witness.is_null()) j["witness"] = witness;
  if (count) j["count"] = *count;
  if (!details.empty()) j["details"] = details;
  if (!warnings.empty()) j["warnings"] = warnings;
  if (timing) j["millis"] = millis;
  return j;
}

std::string CheckReport::summary() const {
  std::string out = fmt::format("{} {}", pass ? "PASS" : "FAIL", check);
  for (auto const& [k, v] : params.items()) {
    out += fmt::format(" {}={}", k, v.is_string() ? v.get<std::string>() : v.dump());
  }
  if (count) out += fmt::format(" count={}", *count);
  for (auto const& [k, v] : details.items()) {
    if (v.is_string()) {
      out += fmt::format(" {}={}", k, v.get<std::string>());
    } else if (!v.is_object()) {
      out += fmt::format(" {}={}", k, v.dump());
    }
  }
  for (auto const& w : warnings) out += "\n  warning: " + w;
  if (!pass) out += "\n  witness: " + witness.dump();
  return out;
}

bool Report::pass() const {
  for (auto const& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Json Report::to_json(bool timing) const {
  Json j;
  j["verdict"] = pass() ? "pass" : "fail";
  j["checks"] = Json::array();
  for (auto const& c : checks) j["checks"].push_back(c.to_json(timing));
  return j;
}

std::string Report::dump(bool timing) const { return to_json(timing).dump(2) + "\n"; }

}  // namespace kmc
