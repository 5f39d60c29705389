#include "mpcp/blocking.hpp"

#include <algorithm>
#include <cmath>

namespace mpcp {

BlockingAnalyzer::BlockingAnalyzer(const TaskSet& ts, const Allocation& alloc)
    : ts_(ts), alloc_(alloc), locality_(resource_locality(ts, alloc)),
      ceilings_(ts.resource_count(), 0), alpha_table_(ts.size()) {
  for (ResourceId r = 0; r < ts.resource_count(); ++r)
    if (!ts.accessors(r).empty()) ceilings_[r] = ceiling_priority(ts, r);

  for (TaskId j = 0; j < ts.size(); ++j) {
    if (!alloc.assigned(j)) continue;
    auto usage = ts.usage(j);
    alpha_table_[j].assign(usage.size(), 0.0);
    for (std::size_t u = 0; u < usage.size(); ++u)
      if (is_global(locality_[usage[u].resource]))
        alpha_table_[j][u] = compute_alpha(j, usage[u].resource);
  }
}

double BlockingAnalyzer::compute_alpha(TaskId holder, ResourceId r) const {
  const CoreId core = alloc_.require_core(holder);
  const Priority threshold = ceilings_[r];
  double sum = 0;
  for (TaskId u : alloc_.tasks_on(core)) {
    if (u == holder) continue;
    double longest = 0;
    for (const ResourceUsage& use : ts_.usage(u))
      if (is_global(locality_[use.resource]) && ceilings_[use.resource] > threshold)
        longest = std::max(longest, use.max_duration);
    sum += longest;
  }
  return sum;
}

double BlockingAnalyzer::alpha(TaskId holder, ResourceId r) const {
  alloc_.require_core(holder);
  if (r >= ts_.resource_count() || ts_.accessors(r).empty()) throw NoAccessorError(r);
  auto usage = ts_.usage(holder);
  for (std::size_t u = 0; u < usage.size(); ++u)
    if (usage[u].resource == r && is_global(locality_[r])) return alpha_table_[holder][u];
  return compute_alpha(holder, r);
}

std::size_t BlockingAnalyzer::global_access_count(TaskId i) const {
  std::size_t n = 0;
  for (const ResourceUsage& use : ts_.usage(i))
    if (is_global(locality_[use.resource])) n += use.count;
  return n;
}

double BlockingAnalyzer::dlb(TaskId i) const {
  const CoreId core = alloc_.require_core(i);
  const Priority own = ts_.task(i).priority;
  double longest = 0;
  for (TaskId j : alloc_.tasks_on(core)) {
    if (ts_.task(j).priority >= own) continue;
    for (const ResourceUsage& use : ts_.usage(j))
      if (is_local(locality_[use.resource]) && ceilings_[use.resource] > own)
        longest = std::max(longest, use.max_duration);
  }
  return static_cast<double>(1 + global_access_count(i)) * longest;
}

double BlockingAnalyzer::dgb_low(TaskId i) const {
  const CoreId core = alloc_.require_core(i);
  const Priority own = ts_.task(i).priority;
  double sum = 0;
  for (const ResourceUsage& use : ts_.usage(i)) {
    if (!is_global(locality_[use.resource])) continue;
    double worst = 0;
    for (TaskId j : ts_.accessors(use.resource)) {
      auto cj = alloc_.core_of(j);
      if (!cj || *cj == core || ts_.task(j).priority >= own) continue;
      worst = std::max(worst, ts_.max_section(j, use.resource) + alpha(j, use.resource));
    }
    sum += static_cast<double>(use.count) * worst;
  }
  return sum;
}

double BlockingAnalyzer::dgb_high(TaskId i) const {
  const CoreId core = alloc_.require_core(i);
  const Task& self = ts_.task(i);
  double sum = 0;
  for (const ResourceUsage& use : ts_.usage(i)) {
    if (!is_global(locality_[use.resource])) continue;
    for (TaskId j : ts_.accessors(use.resource)) {
      auto cj = alloc_.core_of(j);
      const Task& other = ts_.task(j);
      if (!cj || *cj == core || other.priority <= self.priority) continue;
      const ResourceUsage* theirs = ts_.usage_of(j, use.resource);
      const double releases = std::ceil(self.period / other.period);
      sum += releases * (theirs->total_duration +
                         static_cast<double>(theirs->count) * alpha(j, use.resource));
    }
  }
  return sum;
}

double BlockingAnalyzer::mli(TaskId i) const {
  const CoreId core = alloc_.require_core(i);
  const Priority own = ts_.task(i).priority;
  const std::size_t suspensions = 1 + global_access_count(i);
  double sum = 0;
  for (TaskId j : alloc_.tasks_on(core)) {
    if (ts_.task(j).priority >= own) continue;
    const std::size_t requests = 2 * global_access_count(j);
    if (requests == 0) continue;
    double longest = 0;
    for (const ResourceUsage& use : ts_.usage(j))
      if (is_global(locality_[use.resource])) longest = std::max(longest, use.max_duration);
    sum += static_cast<double>(std::min(suspensions, requests)) * longest;
  }
  return sum;
}

BlockingBreakdown BlockingAnalyzer::breakdown(TaskId i) const {
  BlockingBreakdown b;
  b.dlb = dlb(i);
  b.dgb_low = dgb_low(i);
  b.dgb_high = dgb_high(i);
  b.mli = mli(i);
  b.total = b.dlb + b.dgb_low + b.dgb_high + b.mli;
  return b;
}

double alpha(const TaskSet& ts, const Allocation& alloc, TaskId holder, ResourceId r) {
  return BlockingAnalyzer(ts, alloc).alpha(holder, r);
}

double dlb(const TaskSet& ts, const Allocation& alloc, TaskId i) {
  return BlockingAnalyzer(ts, alloc).dlb(i);
}

double dgb_low(const TaskSet& ts, const Allocation& alloc, TaskId i) {
  return BlockingAnalyzer(ts, alloc).dgb_low(i);
}

double dgb_high(const TaskSet& ts, const Allocation& alloc, TaskId i) {
  return BlockingAnalyzer(ts, alloc).dgb_high(i);
}

double mli(const TaskSet& ts, const Allocation& alloc, TaskId i) {
  return BlockingAnalyzer(ts, alloc).mli(i);
}

BlockingBreakdown worst_case_blocking(const TaskSet& ts, const Allocation& alloc, TaskId i) {
  return BlockingAnalyzer(ts, alloc).breakdown(i);
}

}  // namespace mpcp
