#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpcp/io.hpp"
#include "mpcp/partition.hpp"
#include "mpcp/taskgen.hpp"

namespace mpcp {

enum class SweepKind { Cores, Ratio };

/// One configuration of the generator plus, for ratio sweeps, the core count.
struct ConfigPoint {
  double load = 8.0;
  double cs_ratio = 0.12;
  double util_min = 0.10;
  double util_max = 0.15;
  std::size_t resources_per_group = 5;
  std::optional<double> core_multiple;
  std::optional<std::size_t> cores;  // ratio sweeps only

  GenConfig gen_config(GenMode mode) const;
  bool operator==(const ConfigPoint&) const = default;
};

struct SweepSpec {
  std::vector<double> loads{8.0};
  std::vector<double> cs_ratios{0.12};
  double util_min = 0.10;
  double util_max = 0.15;
  std::vector<double> utils;           // fixed per-task utilization axis; overrides the range
  std::vector<double> core_multiples;  // m = ceil(mu * S)
  std::optional<std::size_t> cores;    // fixed m; default 2 * ceil(S)
  std::vector<std::size_t> resources_per_group{5};
  std::size_t trials = 100;
  std::vector<Algorithm> algorithms{Algorithm::BrWfd, Algorithm::Wfd};
  std::uint64_t seed = 1;
  double beta = kDefaultBeta;
  GenMode gen_mode = GenMode::Constrained;
  std::size_t threads = 1;
  bool timing = false;

  /// Throws ConfigError.
  void validate() const;
};

struct ExperimentRecord {
  std::size_t point = 0;  // index into SweepResult::points
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  Algorithm algorithm = Algorithm::BrWfd;
  std::optional<std::size_t> cores_required;  // cores sweep; empty = not schedulable within cap
  bool schedulable = false;                   // ratio sweep
  std::optional<double> wall_ms;
};

struct SweepResult {
  SweepKind kind = SweepKind::Cores;
  std::string axis;  // varying axis name for ratio sweeps
  std::vector<ConfigPoint> points;
  std::vector<ExperimentRecord> records;  // sorted by (point, trial, algorithm)
};

/// Min-cores study: for every (load, cs_ratio) pair and trial, both
/// algorithms search for their smallest feasible core count on the same set.
SweepResult sweep_cores(const SweepSpec& spec);

/// Schedulable-ratio study along exactly one varying axis.
SweepResult sweep_ratio(const SweepSpec& spec);

/// Name of the single varying axis of a ratio sweep ("cs_ratio", "util",
/// "core_multiple", "resources_per_group" or "load"). Throws ConfigError when
/// more than one axis varies.
std::string ratio_axis(const SweepSpec& spec);

struct SummaryRow {
  std::size_t point = 0;
  std::string algorithm;  // "brwfd", "wfd" or "brwfd_vs_wfd"
  std::string metric;     // mean_cores, reduction_pct, schedulable_ratio
  double value = 0;
  std::size_t n_trials = 0;
  std::size_t n_failures = 0;
};

std::vector<SummaryRow> summarize(const SweepResult& result);

std::string summary_csv(const SweepResult& result);
json summary_json(const SweepResult& result);

json record_to_json(const SweepResult& result, const ExperimentRecord& rec);
/// One JSON object per line, terminated by '\n'.
std::string records_jsonl(const SweepResult& result);
/// Inverse of records_jsonl; points are rebuilt in first-seen order.
SweepResult parse_records_jsonl(std::string_view text);

json point_to_json(const ConfigPoint& p);
json sweep_metadata(const SweepSpec& spec, const SweepResult& result);

/// Shortest round-trip decimal for a double.
std::string format_number(double v);

}  // namespace mpcp
