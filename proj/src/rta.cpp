#include "mpcp/rta.hpp"

#include <cmath>

namespace mpcp {

ResponseTime wcrt(const TaskSet& ts, const Allocation& alloc, TaskId i, const BlockingBreakdown& b) {
  const Task& self = ts.task(i);
  const auto higher = lp_hp_sets(ts, alloc, i).higher;
  const double global_wait = b.dgb_high + b.dgb_low;

  ResponseTime out;
  double w = self.wcet + global_wait;
  if (w > self.deadline) return {w, true, 0};
  for (;;) {
    double next = self.wcet + b.total;
    for (TaskId j : higher) {
      const Task& hp = ts.task(j);
      next += std::ceil((w + global_wait) / hp.period) * hp.wcet;
    }
    ++out.iterations;
    if (next > self.deadline) {
      out.value = next;
      out.deadline_miss = true;
      return out;
    }
    if (next == w) break;
    w = next;
  }
  out.value = w;
  return out;
}

ResponseTime wcrt(const TaskSet& ts, const Allocation& alloc, TaskId i) {
  BlockingAnalyzer blocking(ts, alloc);
  return wcrt(ts, alloc, i, blocking.breakdown(i));
}

RtaResult is_schedulable(const TaskSet& ts, const Allocation& alloc) {
  RtaResult result;
  if (alloc.assigned_count() == 0) return result;
  BlockingAnalyzer blocking(ts, alloc);
  for (TaskId i : alloc.assigned_tasks()) {
    TaskVerdict v;
    v.blocking = blocking.breakdown(i);
    const ResponseTime r = wcrt(ts, alloc, i, v.blocking);
    v.wcrt = r.value;
    v.schedulable = !r.deadline_miss;
    if (!v.schedulable && !result.first_failure) result.first_failure = i;
    result.per_task.emplace(i, v);
  }
  return result;
}

bool passes_rta(const TaskSet& ts, const Allocation& alloc) {
  if (alloc.assigned_count() == 0) return true;
  BlockingAnalyzer blocking(ts, alloc);
  for (TaskId i : alloc.assigned_tasks())
    if (wcrt(ts, alloc, i, blocking.breakdown(i)).deadline_miss) return false;
  return true;
}

}  // namespace mpcp
