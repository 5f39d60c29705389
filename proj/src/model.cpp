#include "mpcp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpcp {

namespace {

std::string task_pointer(std::size_t index, const std::string& field = {}) {
  std::string p = "/tasks/" + std::to_string(index);
  if (!field.empty()) p += "/" + field;
  return p;
}

}  // namespace

ValidationError::ValidationError(const std::string& msg, std::string pointer, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg
                     : (pointer.empty() ? msg : pointer + ": " + msg)),
      pointer_(std::move(pointer)),
      line_(line) {}

UnassignedError::UnassignedError(TaskId id)
    : Error("task " + std::to_string(id) + " is not assigned to a core"), task_(id) {}

NoAccessorError::NoAccessorError(ResourceId r)
    : Error("resource " + std::to_string(r) + " has no accessing task") {}

TaskSet::TaskSet(std::vector<Task> tasks, std::size_t resource_count,
                 std::optional<std::vector<std::size_t>> groups)
    : tasks_(std::move(tasks)), resource_count_(resource_count), groups_(std::move(groups)) {
  const std::size_t n = tasks_.size();
  std::vector<bool> seen_priority(n + 1, false);

  for (std::size_t i = 0; i < n; ++i) {
    const Task& t = tasks_[i];
    if (t.id != i)
      throw ValidationError("task ids must be contiguous from 0 (expected " + std::to_string(i) +
                                ", got " + std::to_string(t.id) + ")",
                            task_pointer(i, "id"));
    if (!std::isfinite(t.wcet) || !(t.wcet > 0))
      throw ValidationError("wcet must be positive", task_pointer(i, "wcet_ms"));
    if (!std::isfinite(t.period) || !(t.period > 0))
      throw ValidationError("period must be positive", task_pointer(i, "period_ms"));
    if (t.deadline != t.period)
      throw ValidationError("deadline must equal period (implicit deadlines)",
                            task_pointer(i, "period_ms"));
    if (t.wcet > t.deadline)
      throw ValidationError("wcet exceeds deadline", task_pointer(i, "wcet_ms"));
    if (t.priority < 1 || static_cast<std::size_t>(t.priority) > n)
      throw ValidationError("priority must lie in 1.." + std::to_string(n),
                            task_pointer(i, "priority"));
    if (seen_priority[static_cast<std::size_t>(t.priority)])
      throw ValidationError("duplicate priority " + std::to_string(t.priority),
                            task_pointer(i, "priority"));
    seen_priority[static_cast<std::size_t>(t.priority)] = true;

    double section_sum = 0;
    for (std::size_t s = 0; s < t.sections.size(); ++s) {
      const CriticalSection& cs = t.sections[s];
      const std::string where = task_pointer(i, "sections/" + std::to_string(s));
      if (cs.resource >= resource_count_)
        throw ValidationError("resource " + std::to_string(cs.resource) + " out of range (q = " +
                                  std::to_string(resource_count_) + ")",
                              where + "/resource");
      if (!std::isfinite(cs.duration) || cs.duration < 0)
        throw ValidationError("section duration must be non-negative", where + "/duration_ms");
      section_sum += cs.duration;
    }
    if (section_sum > t.wcet * (1 + 1e-12))
      throw ValidationError("critical sections exceed wcet", task_pointer(i, "sections"));
  }

  if (groups_ && groups_->size() != resource_count_)
    throw ValidationError("groups must have one entry per resource", "/groups");

  usage_.resize(n);
  accessors_.resize(resource_count_);
  for (std::size_t i = 0; i < n; ++i) {
    auto& usage = usage_[i];
    for (const CriticalSection& cs : tasks_[i].sections) {
      auto it = std::lower_bound(usage.begin(), usage.end(), cs.resource,
                                 [](const ResourceUsage& u, ResourceId r) { return u.resource < r; });
      if (it == usage.end() || it->resource != cs.resource)
        it = usage.insert(it, ResourceUsage{cs.resource, 0, 0.0, 0.0});
      ++it->count;
      it->max_duration = std::max(it->max_duration, cs.duration);
      it->total_duration += cs.duration;
    }
    for (const ResourceUsage& u : usage) accessors_[u.resource].push_back(i);
  }
  for (auto& list : accessors_)
    std::sort(list.begin(), list.end(), [this](TaskId a, TaskId b) {
      return tasks_[a].priority > tasks_[b].priority;
    });
}

const ResourceUsage* TaskSet::usage_of(TaskId id, ResourceId r) const {
  const auto& usage = usage_.at(id);
  auto it = std::lower_bound(usage.begin(), usage.end(), r,
                             [](const ResourceUsage& u, ResourceId key) { return u.resource < key; });
  return (it != usage.end() && it->resource == r) ? &*it : nullptr;
}

std::size_t TaskSet::access_count(TaskId id, ResourceId r) const {
  const ResourceUsage* u = usage_of(id, r);
  return u ? u->count : 0;
}

double TaskSet::max_section(TaskId id, ResourceId r) const {
  const ResourceUsage* u = usage_of(id, r);
  return u ? u->max_duration : 0.0;
}

double TaskSet::total_section(TaskId id, ResourceId r) const {
  const ResourceUsage* u = usage_of(id, r);
  return u ? u->total_duration : 0.0;
}

std::vector<ResourceId> TaskSet::resource_set(TaskId id) const {
  std::vector<ResourceId> out;
  for (const ResourceUsage& u : usage_.at(id)) out.push_back(u.resource);
  return out;
}

double TaskSet::total_utilization() const {
  double sum = 0;
  for (const Task& t : tasks_) sum += t.utilization();
  return sum;
}

Allocation::Allocation(const TaskSet& ts, std::size_t core_count)
    : assignment_(ts.size()), core_tasks_(core_count), utilization_(core_count, 0.0) {}

Allocation Allocation::from_cores(const TaskSet& ts, std::size_t core_count,
                                  const std::vector<std::vector<TaskId>>& cores) {
  if (cores.size() > core_count)
    throw ValidationError("allocation lists " + std::to_string(cores.size()) +
                          " cores but core_count is " + std::to_string(core_count));
  Allocation alloc(ts, core_count);
  for (CoreId c = 0; c < cores.size(); ++c) {
    for (TaskId t : cores[c]) {
      if (t >= ts.size())
        throw ValidationError("allocation references unknown task " + std::to_string(t));
      if (alloc.assigned(t))
        throw ValidationError("task " + std::to_string(t) + " assigned twice");
      alloc = alloc.with(ts, t, c);
    }
  }
  return alloc;
}

Allocation Allocation::with(const TaskSet& ts, TaskId task, CoreId core) const {
  if (core >= core_count())
    throw Error("core " + std::to_string(core) + " out of range");
  if (assignment_.at(task))
    throw Error("task " + std::to_string(task) + " already assigned");
  Allocation next = *this;
  next.assignment_[task] = core;
  next.core_tasks_[core].push_back(task);
  next.utilization_[core] += ts.task(task).utilization();
  ++next.assigned_count_;
  return next;
}

CoreId Allocation::require_core(TaskId id) const {
  if (id >= assignment_.size() || !assignment_[id]) throw UnassignedError(id);
  return *assignment_[id];
}

std::vector<TaskId> Allocation::assigned_tasks() const {
  std::vector<TaskId> out;
  for (TaskId i = 0; i < assignment_.size(); ++i)
    if (assignment_[i]) out.push_back(i);
  return out;
}

std::vector<Locality> resource_locality(const TaskSet& ts, const Allocation& alloc) {
  std::vector<Locality> out(ts.resource_count(), Unused{});
  for (ResourceId r = 0; r < ts.resource_count(); ++r) {
    for (TaskId t : ts.accessors(r)) {
      auto core = alloc.core_of(t);
      if (!core) continue;
      if (std::holds_alternative<Unused>(out[r])) {
        out[r] = Local{*core};
      } else if (auto* l = std::get_if<Local>(&out[r]); l && l->core != *core) {
        out[r] = Global{};
        break;
      }
    }
  }
  return out;
}

Priority ceiling_priority(const TaskSet& ts, ResourceId r) {
  auto acc = ts.accessors(r);
  if (acc.empty()) throw NoAccessorError(r);
  return base_ceiling(ts) + ts.task(acc.front()).priority;
}

LocalPriorityGroups lp_hp_sets(const TaskSet& ts, const Allocation& alloc, TaskId id) {
  const CoreId core = alloc.require_core(id);
  const Priority own = ts.task(id).priority;
  LocalPriorityGroups out;
  for (TaskId other : alloc.tasks_on(core)) {
    if (other == id) continue;
    (ts.task(other).priority < own ? out.lower : out.higher).push_back(other);
  }
  std::sort(out.lower.begin(), out.lower.end());
  std::sort(out.higher.begin(), out.higher.end());
  return out;
}

}  // namespace mpcp
