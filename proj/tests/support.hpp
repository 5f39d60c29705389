#pragma once

// Test-only fixtures and oracles. Nothing here calls into the blocking, RTA
// or partitioning code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "mpcp/model.hpp"

namespace mpcp::testing {

// Two cores: τ1(C=1,T=4,Π=3) and τ2(C=2,T=10,Π=2) on core 0, τ3(C=3,T=20,Π=1)
// on core 1; one resource used by τ1 (0.2 ms) and τ3 (0.5 ms).
inline TaskSet f1_tasks() {
  std::vector<Task> tasks{
      {0, 1.0, 4.0, 4.0, 3, {{0, 0.2}}},
      {1, 2.0, 10.0, 10.0, 2, {}},
      {2, 3.0, 20.0, 20.0, 1, {{0, 0.5}}},
  };
  return TaskSet(std::move(tasks), 1);
}

inline Allocation f1_allocation(const TaskSet& ts) {
  return Allocation::from_cores(ts, 2, {{0, 1}, {2}});
}

inline Task make_task(TaskId id, double c, double t, Priority p,
                      std::vector<CriticalSection> sections = {}) {
  return Task{id, c, t, t, p, std::move(sections)};
}

// ---------------------------------------------------------------------------
// Direct evaluation of the blocking bounds from raw section lists.

struct RawBlocking {
  double dlb = 0, dgb_low = 0, dgb_high = 0, mli = 0, total = 0;
};

class BlockingOracle {
 public:
  // core[i] < 0 means unassigned.
  BlockingOracle(std::vector<Task> tasks, std::size_t q, std::vector<int> core)
      : tasks_(std::move(tasks)), q_(q), core_(std::move(core)) {}

  double gmax(std::size_t u, std::size_t x) const {
    double m = 0;
    for (const auto& s : tasks_[u].sections)
      if (s.resource == x) m = std::max(m, s.duration);
    return m;
  }
  double gtotal(std::size_t u, std::size_t x) const {
    double m = 0;
    for (const auto& s : tasks_[u].sections)
      if (s.resource == x) m += s.duration;
    return m;
  }
  std::size_t count(std::size_t u, std::size_t x) const {
    std::size_t c = 0;
    for (const auto& s : tasks_[u].sections)
      if (s.resource == x) ++c;
    return c;
  }
  bool uses(std::size_t u, std::size_t x) const { return count(u, x) > 0; }

  std::set<int> cores_using(std::size_t x) const {
    std::set<int> cs;
    for (std::size_t u = 0; u < tasks_.size(); ++u)
      if (core_[u] >= 0 && uses(u, x)) cs.insert(core_[u]);
    return cs;
  }
  bool global(std::size_t x) const { return cores_using(x).size() >= 2; }
  bool local(std::size_t x) const { return cores_using(x).size() == 1; }

  long ceiling(std::size_t x) const {
    long hi = 0;
    for (std::size_t u = 0; u < tasks_.size(); ++u)
      if (uses(u, x)) hi = std::max(hi, tasks_[u].priority);
    return static_cast<long>(tasks_.size()) + 1 + hi;
  }

  std::size_t n_global(std::size_t i) const {
    std::size_t n = 0;
    for (std::size_t x = 0; x < q_; ++x)
      if (global(x)) n += count(i, x);
    return n;
  }

  double alpha(std::size_t j, std::size_t k) const {
    double sum = 0;
    for (std::size_t u = 0; u < tasks_.size(); ++u) {
      if (u == j || core_[u] != core_[j]) continue;
      double best = 0;
      for (std::size_t x = 0; x < q_; ++x)
        if (uses(u, x) && global(x) && ceiling(x) > ceiling(k)) best = std::max(best, gmax(u, x));
      sum += best;
    }
    return sum;
  }

  RawBlocking blocking(std::size_t i) const {
    RawBlocking b;
    const auto& ti = tasks_[i];
    double longest_local = 0;
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      if (core_[j] != core_[i] || tasks_[j].priority >= ti.priority) continue;
      for (std::size_t l = 0; l < q_; ++l)
        if (uses(j, l) && local(l) && ti.priority < ceiling(l))
          longest_local = std::max(longest_local, gmax(j, l));
    }
    b.dlb = static_cast<double>(1 + n_global(i)) * longest_local;

    for (std::size_t k = 0; k < q_; ++k) {
      if (!uses(i, k) || !global(k)) continue;
      double worst = 0;
      for (std::size_t j = 0; j < tasks_.size(); ++j) {
        if (core_[j] < 0 || core_[j] == core_[i] || !uses(j, k)) continue;
        if (tasks_[j].priority < ti.priority) {
          worst = std::max(worst, gmax(j, k) + alpha(j, k));
        } else if (tasks_[j].priority > ti.priority) {
          b.dgb_high += std::ceil(ti.period / tasks_[j].period) *
                        (gtotal(j, k) + static_cast<double>(count(j, k)) * alpha(j, k));
        }
      }
      b.dgb_low += static_cast<double>(count(i, k)) * worst;
    }

    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      if (core_[j] != core_[i] || tasks_[j].priority >= ti.priority) continue;
      double longest = 0;
      for (std::size_t k = 0; k < q_; ++k)
        if (uses(j, k) && global(k)) longest = std::max(longest, gmax(j, k));
      b.mli += static_cast<double>(std::min(1 + n_global(i), 2 * n_global(j))) * longest;
    }
    b.total = b.dlb + b.dgb_low + b.dgb_high + b.mli;
    return b;
  }

 private:
  std::vector<Task> tasks_;
  std::size_t q_;
  std::vector<int> core_;
};

// ---------------------------------------------------------------------------
// Classical fixed-priority response-time analysis (no blocking).
// Returns nullopt on deadline miss.
inline std::optional<double> textbook_response_time(const std::vector<Task>& tasks, std::size_t i) {
  const Task& me = tasks[i];
  double r = me.wcet;
  for (;;) {
    double next = me.wcet;
    for (const Task& other : tasks)
      if (other.priority > me.priority) next += std::ceil(r / other.period) * other.wcet;
    if (next > me.deadline) return std::nullopt;
    if (next == r) return r;
    r = next;
  }
}

// ---------------------------------------------------------------------------
// Small random instances.

struct RandomInstance {
  std::vector<Task> tasks;
  std::size_t resources = 0;
};

inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_tasks,
                                      std::size_t max_resources, std::size_t max_sections,
                                      double max_util = 0.5) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_tasks);
  std::uniform_int_distribution<std::size_t> q_dist(1, max_resources);
  std::uniform_real_distribution<double> period_dist(5.0, 100.0);
  std::uniform_real_distribution<double> util_dist(0.02, max_util);
  std::uniform_int_distribution<std::size_t> sec_dist(0, max_sections);
  std::uniform_real_distribution<double> frac(0.0, 1.0);

  RandomInstance inst;
  const std::size_t n = n_dist(rng);
  inst.resources = q_dist(rng);
  std::vector<Priority> prio(n);
  std::iota(prio.begin(), prio.end(), Priority{1});
  std::shuffle(prio.begin(), prio.end(), rng);
  std::uniform_int_distribution<std::size_t> res_dist(0, inst.resources - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = std::round(period_dist(rng));
    const double c = std::max(0.5, std::round(util_dist(rng) * t * 4) / 4);
    Task task = make_task(i, c, t, prio[i]);
    const std::size_t k = sec_dist(rng);
    for (std::size_t s = 0; s < k; ++s)
      task.sections.push_back({res_dist(rng), std::round(frac(rng) * c / (k + 1) * 100) / 100});
    inst.tasks.push_back(std::move(task));
  }
  return inst;
}

}  // namespace mpcp::testing
