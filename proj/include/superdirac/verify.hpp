#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "superdirac/sw.hpp"

namespace superdirac {

struct CheckRecord {
  std::string id;
  std::string anchor;  // the identity being checked
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  double wall_ms = 0.0;  // only reported with timing enabled
};

struct VerificationReport {
  std::string suite;
  std::string chart;
  std::uint64_t seed = 1;
  int samples = 20;
  bool timing = false;
  std::vector<CheckRecord> checks;  // sorted by id
  bool pass = true;

  const CheckRecord* find(const std::string& id) const;
  std::string to_json() const;
  std::string to_human() const;
};

struct VerifyOptions {
  std::string suite;
  std::string chart = "flat";
  std::uint64_t seed = 1;
  int samples = 20;  // sample points; each check draws several jets per point
  bool timing = false;
  std::optional<SWConfig> sw;  // required by the sw suite
};

const std::vector<std::string>& suite_names();
// Throws ConfigError for an unknown suite or a chart the suite cannot use.
VerificationReport run_verify(const VerifyOptions& opt);

}  // namespace superdirac
