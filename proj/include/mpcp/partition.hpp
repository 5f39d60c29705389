#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpcp/model.hpp"

namespace mpcp {

inline constexpr double kDefaultBeta = 0.1;

struct PbuEntry {
  double pgb_low = 0;
  double pgb_high = 0;
  double pbu = 0;
};

struct PbuTable {
  double beta = kDefaultBeta;
  std::vector<PbuEntry> tasks;  // indexed by task id
};

/// Allocation-independent estimate of lower-priority global blocking: every
/// shared resource treated as global, every lower-priority sharer as remote.
double pgb_low(const TaskSet& ts, TaskId i);
/// Higher-priority counterpart: ceil(T_i/T_j) releases of each sharer's total
/// section time per shared resource.
double pgb_high(const TaskSet& ts, TaskId i);
/// PBU_i = (C_i + beta * (pgb_low + pgb_high)) / T_i.
PbuTable pbu_table(const TaskSet& ts, double beta = kDefaultBeta);

/// |Θ_i ∩ Θ_j|
std::size_t resource_correlation(const TaskSet& ts, TaskId i, TaskId j);
/// Sum of correlations between `i` and every task currently on `core`.
std::size_t resource_similarity(const TaskSet& ts, const Allocation& alloc, TaskId i, CoreId core);

enum class Algorithm { BrWfd, Wfd };

std::string to_string(Algorithm a);
/// Accepts "brwfd" / "br-wfd" / "wfd"; throws Error otherwise.
Algorithm parse_algorithm(const std::string& name);

enum class Placement {
  Similarity,      // kept the max-similarity candidate
  ZeroSimilarity,  // no core shares resources; went straight to min load
  Fallback,        // candidate would exceed the running max load; min load instead
  WorstFit,        // plain WFD placement
};

std::string to_string(Placement p);

struct TraceEntry {
  TaskId task = 0;
  std::optional<CoreId> candidate;  // max-similarity core, if any
  CoreId chosen = 0;
  Placement placement = Placement::WorstFit;
  double max_load_after = 0;        // BUmax after the commit (BR-WFD only)
};

struct PartitionOutcome {
  Allocation allocation;            // full on success, partial up to the failing commit otherwise
  bool success = false;
  std::optional<TaskId> failed_task;  // lowest-id task failing the RTA on the failing commit
  std::vector<double> core_utilization;
  std::vector<double> core_load;    // BU^j; equals utilization for WFD
  std::vector<TraceEntry> trace;
};

/// Blocking-aware worst-fit decreasing: tasks by PBU descending (ties by
/// id), each placed on its max-similarity core unless that core's blocking
/// load would exceed the running maximum, in which case the least-loaded
/// core is used. Every commit is followed by an RTA of the partial
/// allocation; the first failure aborts.
PartitionOutcome allocate_brwfd(const TaskSet& ts, std::size_t cores, double beta = kDefaultBeta);

/// Utilization-sorted worst-fit with the same incremental RTA check.
PartitionOutcome allocate_wfd(const TaskSet& ts, std::size_t cores);

PartitionOutcome allocate(const TaskSet& ts, std::size_t cores, Algorithm algorithm,
                          double beta = kDefaultBeta);

struct MinCoresResult {
  std::optional<std::size_t> cores;  // empty: not schedulable within cap
  std::size_t start = 0;
  std::size_t cap = 0;
};

/// Smallest m >= ceil(total utilization) at which the allocator succeeds.
/// `cap` defaults to 8 * max(start, 1).
MinCoresResult min_cores(const TaskSet& ts, Algorithm algorithm, double beta = kDefaultBeta,
                         std::optional<std::size_t> cap = std::nullopt);

}  // namespace mpcp
