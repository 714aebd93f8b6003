#pragma once
// Structured result of one named check, serialized as JSON for the CLI.
// Doubles round-trip at full precision through nlohmann's shortest-exact
// formatting; wall time is kept in a single trailing field so reports can be
// compared byte-for-byte with it stripped.

#include <string>
#include <vector>

#include "json.hpp"

namespace lab {

struct CheckReport {
  std::string name;
  bool pass = false;
  double tolerance = 0;
  double max_residual = 0;
  int samples = 0;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::vector<std::string> notes;
  double wall_ms = 0;

  void observe(double r) { max_residual = std::max(max_residual, r); }

  nlohmann::ordered_json json() const {
    nlohmann::ordered_json j;
    j["check"] = name;
    j["pass"] = pass;
    j["tolerance"] = tolerance;
    j["max_residual"] = max_residual;
    j["samples"] = samples;
    j["details"] = details;
    j["notes"] = notes;
    j["wall_ms"] = wall_ms;
    return j;
  }
};

}  // namespace lab
