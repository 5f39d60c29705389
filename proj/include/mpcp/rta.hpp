#pragma once

#include <map>
#include <optional>

#include "mpcp/blocking.hpp"
#include "mpcp/model.hpp"

namespace mpcp {

struct ResponseTime {
  double value = 0;          // converged W, or the first iterate past the deadline
  bool deadline_miss = false;
  std::size_t iterations = 0;
};

struct TaskVerdict {
  double wcrt = 0;
  BlockingBreakdown blocking;
  bool schedulable = false;
};

struct RtaResult {
  std::map<TaskId, TaskVerdict> per_task;
  std::optional<TaskId> first_failure;  // lowest failing id; empty when schedulable

  bool schedulable() const { return !first_failure.has_value(); }
};

/// Fixed-point response-time iteration with MPCP blocking. The window seed is
/// C + DGB^H + DGB^L; each step adds the full B plus local higher-priority
/// interference over (W + DGB^H + DGB^L). Stops on exact equality of
/// successive iterates or as soon as an iterate exceeds the deadline.
ResponseTime wcrt(const TaskSet& ts, const Allocation& alloc, TaskId i);
/// Same iteration with a precomputed blocking breakdown for task i.
ResponseTime wcrt(const TaskSet& ts, const Allocation& alloc, TaskId i, const BlockingBreakdown& b);

/// Analyzes every assigned task; unassigned tasks are ignored.
RtaResult is_schedulable(const TaskSet& ts, const Allocation& alloc);

/// Same verdict as is_schedulable but stops at the first failing task id.
bool passes_rta(const TaskSet& ts, const Allocation& alloc);

}  // namespace mpcp
