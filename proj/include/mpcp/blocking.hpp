#pragma once

#include <vector>

#include "mpcp/model.hpp"

namespace mpcp {

/// Worst-case MPCP blocking of one task, in ms.
struct BlockingBreakdown {
  double dlb = 0;       // local resource blocking
  double dgb_low = 0;   // remote lower-priority holders of global resources
  double dgb_high = 0;  // remote higher-priority requesters (multiple remote blocking)
  double mli = 0;       // multiple priority inversion by local lower-priority tasks
  double total = 0;
};

/// Blocking bounds for a fixed (possibly partial) allocation.
///
/// Construction classifies resources, computes ceilings and tabulates the
/// transitive-preemption term for every (assigned task, global resource it
/// uses) pair, so one analyzer serves every task of a response-time pass.
/// Only assigned tasks participate; querying an unassigned task throws
/// UnassignedError. Holds references to its inputs.
class BlockingAnalyzer {
 public:
  BlockingAnalyzer(const TaskSet& ts, const Allocation& alloc);

  /// Transitive remote preemption while `holder` is inside a section on `r`:
  /// sum over the holder's co-located tasks of their longest global section
  /// whose ceiling exceeds that of `r`.
  double alpha(TaskId holder, ResourceId r) const;

  double dlb(TaskId i) const;
  double dgb_low(TaskId i) const;
  double dgb_high(TaskId i) const;
  double mli(TaskId i) const;
  BlockingBreakdown breakdown(TaskId i) const;

  /// Number of task i's sections on currently global resources (N_{i,G}).
  std::size_t global_access_count(TaskId i) const;

  const std::vector<Locality>& locality() const { return locality_; }
  Priority ceiling(ResourceId r) const { return ceilings_.at(r); }

 private:
  double compute_alpha(TaskId holder, ResourceId r) const;

  const TaskSet& ts_;
  const Allocation& alloc_;
  std::vector<Locality> locality_;
  std::vector<Priority> ceilings_;  // 0 for unused resources
  // Parallel to ts.usage(j); only entries on global resources are meaningful.
  std::vector<std::vector<double>> alpha_table_;
};

double alpha(const TaskSet& ts, const Allocation& alloc, TaskId holder, ResourceId r);
double dlb(const TaskSet& ts, const Allocation& alloc, TaskId i);
double dgb_low(const TaskSet& ts, const Allocation& alloc, TaskId i);
double dgb_high(const TaskSet& ts, const Allocation& alloc, TaskId i);
double mli(const TaskSet& ts, const Allocation& alloc, TaskId i);
BlockingBreakdown worst_case_blocking(const TaskSet& ts, const Allocation& alloc, TaskId i);

}  // namespace mpcp
