#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "warped/families.hpp"
#include "warped/fd_oracle.hpp"
#include "warped/point.hpp"

namespace warped {

struct SampleRanges {
  double r_lo = 0.0, r_hi = 0.0;  // zero width: derived from the family domain
  double y0_lo = -2.0, y0_hi = 2.0;
  double ybar_lo = 0.5, ybar_hi = 2.0;  // range for |ybar|
  double x0_lo = -1.0, x0_hi = 1.0;
};

// The check vocabulary. "oracle" expands into the five closed-form vs
// finite-difference comparisons.
const std::vector<std::string>& known_checks();
double default_tolerance(const std::string& expanded_check);

struct CampaignSpec {
  int n = 3;
  int samples = 200;
  std::uint64_t seed = 1;
  SampleRanges ranges;
  std::vector<std::string> checks;            // empty: metric/douglas/berwald/landsberg/convexity
  std::map<std::string, double> tolerances;   // overrides by expanded name
  int threads = 0;                            // 0: hardware concurrency
  bool strict = false;                        // caller may escalate violations
  FDConfig fd;
};

struct CheckResult {
  std::string name;
  double value = 0.0;  // sup over sampled points
  double tolerance = 0.0;
  bool pass = false;
  bool has_worst = false;
  EvalPoint worst;
};

struct PerPointRow {
  int sample = 0;
  std::string check;
  double value = 0.0;
  EvalPoint point;
};

struct CampaignReport {
  std::string tool_version;
  std::string family;
  std::string family_name;
  CampaignSpec spec;
  std::vector<CheckResult> checks;
  int convexity_violations = 0;
  int evaluation_errors = 0;
  std::vector<std::string> notes;  // capped at a handful
  std::vector<PerPointRow> rows;
  bool pass = false;
  double runtime_ms = 0.0;

  // Deterministic serialization; timing is the only run-dependent field and
  // is omitted when include_timing is false.
  std::string to_json(bool include_timing) const;
  std::string per_point_csv() const;
  std::string summary_csv() const;
};

CampaignReport run_campaign(const MetricFamily& fam, const CampaignSpec& spec);

}  // namespace warped
