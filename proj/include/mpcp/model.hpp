#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mpcp {

using TaskId = std::size_t;
using CoreId = std::size_t;
using ResourceId = std::size_t;
using Priority = long;

// Base error for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a task-set invariant. `pointer` is a JSON pointer to the
// offending value (empty for in-memory construction), `line` is 1-based when
// the input came from text.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& msg, std::string pointer = {}, std::size_t line = 0);
  const std::string& pointer() const { return pointer_; }
  std::size_t line() const { return line_; }

 private:
  std::string pointer_;
  std::size_t line_;
};

class UnassignedError : public Error {
 public:
  explicit UnassignedError(TaskId id);
  TaskId task() const { return task_; }

 private:
  TaskId task_;
};

class NoAccessorError : public Error {
 public:
  explicit NoAccessorError(ResourceId r);
};

struct CriticalSection {
  ResourceId resource = 0;
  double duration = 0.0;  // ms
};

// Aggregate of one task's sections on a single resource.
struct ResourceUsage {
  ResourceId resource = 0;
  std::size_t count = 0;     // N_{i,k}
  double max_duration = 0;   // longest single section
  double total_duration = 0; // sum over all sections
};

struct Task {
  TaskId id = 0;
  double wcet = 0;      // C_i, ms
  double period = 0;    // T_i, ms
  double deadline = 0;  // D_i, ms (implicit: equals period)
  Priority priority = 0;
  std::vector<CriticalSection> sections;

  double utilization() const { return wcet / period; }
};

/// Immutable validated task set.
///
/// Per-task resource usage (the resource set, access counts, longest and
/// total section length per resource) is derived once at construction and
/// served from sorted tables. Accessor lists per resource are kept in
/// descending priority order.
class TaskSet {
 public:
  TaskSet() = default;

  /// Validates and takes ownership. Throws ValidationError on any violation.
  TaskSet(std::vector<Task> tasks, std::size_t resource_count,
          std::optional<std::vector<std::size_t>> groups = std::nullopt);

  std::size_t size() const { return tasks_.size(); }
  bool empty() const { return tasks_.empty(); }
  std::size_t resource_count() const { return resource_count_; }
  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& task(TaskId id) const { return tasks_.at(id); }
  const std::optional<std::vector<std::size_t>>& groups() const { return groups_; }

  /// Usage entries sorted by resource id; one entry per distinct resource.
  std::span<const ResourceUsage> usage(TaskId id) const { return usage_.at(id); }
  /// Null when the task never touches `r`.
  const ResourceUsage* usage_of(TaskId id, ResourceId r) const;

  bool accesses(TaskId id, ResourceId r) const { return usage_of(id, r) != nullptr; }
  std::size_t access_count(TaskId id, ResourceId r) const;
  double max_section(TaskId id, ResourceId r) const;
  double total_section(TaskId id, ResourceId r) const;
  std::vector<ResourceId> resource_set(TaskId id) const;

  /// Tasks touching `r`, highest priority first.
  std::span<const TaskId> accessors(ResourceId r) const { return accessors_.at(r); }

  double total_utilization() const;

 private:
  std::vector<Task> tasks_;
  std::size_t resource_count_ = 0;
  std::optional<std::vector<std::size_t>> groups_;
  std::vector<std::vector<ResourceUsage>> usage_;
  std::vector<std::vector<TaskId>> accessors_;
};

/// Task-to-core mapping, possibly partial. Values are immutable; `with`
/// returns an extended copy.
class Allocation {
 public:
  Allocation() = default;
  Allocation(const TaskSet& ts, std::size_t core_count);

  /// Builds from per-core task lists. Throws ValidationError on bad ids,
  /// duplicates or out-of-range cores.
  static Allocation from_cores(const TaskSet& ts, std::size_t core_count,
                               const std::vector<std::vector<TaskId>>& cores);

  Allocation with(const TaskSet& ts, TaskId task, CoreId core) const;

  std::size_t core_count() const { return core_tasks_.size(); }
  std::size_t task_count() const { return assignment_.size(); }
  std::optional<CoreId> core_of(TaskId id) const { return assignment_.at(id); }
  bool assigned(TaskId id) const { return assignment_.at(id).has_value(); }
  /// Throws UnassignedError.
  CoreId require_core(TaskId id) const;

  /// Tasks on `core` in assignment order.
  std::span<const TaskId> tasks_on(CoreId core) const { return core_tasks_.at(core); }
  double utilization(CoreId core) const { return utilization_.at(core); }
  std::vector<TaskId> assigned_tasks() const;
  std::size_t assigned_count() const { return assigned_count_; }
  bool complete() const { return assigned_count_ == assignment_.size(); }

 private:
  std::vector<std::optional<CoreId>> assignment_;
  std::vector<std::vector<TaskId>> core_tasks_;
  std::vector<double> utilization_;
  std::size_t assigned_count_ = 0;
};

struct Unused {};
struct Global {};
struct Local {
  CoreId core;
};
using Locality = std::variant<Unused, Local, Global>;

inline bool is_global(const Locality& l) { return std::holds_alternative<Global>(l); }
inline bool is_local(const Locality& l) { return std::holds_alternative<Local>(l); }

/// Classifies every resource from the assigned tasks only.
std::vector<Locality> resource_locality(const TaskSet& ts, const Allocation& alloc);

/// Ω_k = (n + 1) + highest accessor priority. Throws NoAccessorError.
Priority ceiling_priority(const TaskSet& ts, ResourceId r);

/// Priority lying above every base priority of the set.
inline Priority base_ceiling(const TaskSet& ts) { return static_cast<Priority>(ts.size()) + 1; }

struct LocalPriorityGroups {
  std::vector<TaskId> lower;
  std::vector<TaskId> higher;
};

/// lp(i) and hp(i) on the core of `id`, ascending by task id.
LocalPriorityGroups lp_hp_sets(const TaskSet& ts, const Allocation& alloc, TaskId id);

}  // namespace mpcp
