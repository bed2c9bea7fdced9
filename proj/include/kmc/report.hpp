#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kmc {

using Json = nlohmann::ordered_json;

struct CheckReport {
  std::string check;
  Json params = Json::object();
  bool pass = true;
  Json witness;  // null unless the check failed
  std::optional<std::uint64_t> count;
  Json details = Json::object();
  std::vector<std::string> warnings;
  std::int64_t millis = 0;

  void fail(Json w) {
    if (pass) witness = std::move(w);
    pass = false;
  }
  // millis only when timing is requested, so reports are reproducible
  Json to_json(bool timing = false) const;
  std::string summary() const;
};

struct Report {
  std::vector<CheckReport> checks;

  bool pass() const;
  Json to_json(bool timing = false) const;
  std::string dump(bool timing = false) const;
};

}  // namespace kmc
