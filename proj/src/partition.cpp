#include "mpcp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mpcp/rta.hpp"

namespace mpcp {

namespace {

CoreId least_loaded(const std::vector<double>& load) {
  return static_cast<CoreId>(std::min_element(load.begin(), load.end()) - load.begin());
}

std::vector<TaskId> sorted_by_key_desc(const std::vector<double>& key) {
  std::vector<TaskId> order(key.size());
  std::iota(order.begin(), order.end(), TaskId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](TaskId a, TaskId b) { return key[a] > key[b]; });
  return order;
}

// Commits `task` and checks the partial allocation. Returns false on RTA failure.
bool commit(const TaskSet& ts, PartitionOutcome& out, TaskId task, CoreId core) {
  out.allocation = out.allocation.with(ts, task, core);
  out.core_utilization[core] = out.allocation.utilization(core);
  if (passes_rta(ts, out.allocation)) return true;
  out.failed_task = is_schedulable(ts, out.allocation).first_failure;
  return false;
}

PartitionOutcome start(const TaskSet& ts, std::size_t cores) {
  if (cores == 0) throw Error("core count must be at least 1");
  PartitionOutcome out;
  out.allocation = Allocation(ts, cores);
  out.core_utilization.assign(cores, 0.0);
  out.core_load.assign(cores, 0.0);
  return out;
}

}  // namespace

double pgb_low(const TaskSet& ts, TaskId i) {
  const Priority own = ts.task(i).priority;
  double sum = 0;
  for (const ResourceUsage& use : ts.usage(i)) {
    double longest = 0;
    for (TaskId j : ts.accessors(use.resource))
      if (ts.task(j).priority < own)
        longest = std::max(longest, ts.max_section(j, use.resource));
    sum += longest;
  }
  return sum;
}

double pgb_high(const TaskSet& ts, TaskId i) {
  const Task& self = ts.task(i);
  double sum = 0;
  for (const ResourceUsage& use : ts.usage(i)) {
    for (TaskId j : ts.accessors(use.resource)) {
      const Task& other = ts.task(j);
      if (other.priority <= self.priority) continue;
      sum += std::ceil(self.period / other.period) * ts.total_section(j, use.resource);
    }
  }
  return sum;
}

PbuTable pbu_table(const TaskSet& ts, double beta) {
  if (!(beta >= 0)) throw Error("beta must be non-negative");
  PbuTable table;
  table.beta = beta;
  table.tasks.reserve(ts.size());
  for (const Task& t : ts.tasks()) {
    PbuEntry e;
    e.pgb_low = pgb_low(ts, t.id);
    e.pgb_high = pgb_high(ts, t.id);
    e.pbu = (t.wcet + beta * (e.pgb_low + e.pgb_high)) / t.period;
    table.tasks.push_back(e);
  }
  return table;
}

std::size_t resource_correlation(const TaskSet& ts, TaskId i, TaskId j) {
  auto a = ts.usage(i);
  auto b = ts.usage(j);
  std::size_t shared = 0;
  // Both lists are sorted by resource id.
  for (auto x = a.begin(), y = b.begin(); x != a.end() && y != b.end();) {
    if (x->resource < y->resource) {
      ++x;
    } else if (y->resource < x->resource) {
      ++y;
    } else {
      ++shared;
      ++x;
      ++y;
    }
  }
  return shared;
}

std::size_t resource_similarity(const TaskSet& ts, const Allocation& alloc, TaskId i, CoreId core) {
  std::size_t sum = 0;
  for (TaskId j : alloc.tasks_on(core))
    if (j != i) sum += resource_correlation(ts, i, j);
  return sum;
}

std::string to_string(Algorithm a) { return a == Algorithm::BrWfd ? "brwfd" : "wfd"; }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "brwfd" || name == "br-wfd") return Algorithm::BrWfd;
  if (name == "wfd") return Algorithm::Wfd;
  throw Error("unknown algorithm '" + name + "'");
}

std::string to_string(Placement p) {
  switch (p) {
    case Placement::Similarity: return "similarity";
    case Placement::ZeroSimilarity: return "zero-similarity";
    case Placement::Fallback: return "fallback";
    case Placement::WorstFit: return "worst-fit";
  }
  return "unknown";
}

PartitionOutcome allocate_brwfd(const TaskSet& ts, std::size_t cores, double beta) {
  PartitionOutcome out = start(ts, cores);
  const PbuTable table = pbu_table(ts, beta);
  std::vector<double> pbu;
  for (const PbuEntry& e : table.tasks) pbu.push_back(e.pbu);

  double max_load = 0;
  for (TaskId task : sorted_by_key_desc(pbu)) {
    TraceEntry entry;
    entry.task = task;

    std::size_t best_similarity = 0;
    for (CoreId c = 0; c < cores; ++c) {
      const std::size_t s = resource_similarity(ts, out.allocation, task, c);
      if (s > best_similarity ||
          (s == best_similarity && s > 0 && out.core_load[c] < out.core_load[*entry.candidate])) {
        best_similarity = s;
        entry.candidate = c;
      }
    }

    if (!entry.candidate) {
      entry.placement = Placement::ZeroSimilarity;
      entry.chosen = least_loaded(out.core_load);
    } else if (out.core_load[*entry.candidate] + pbu[task] > max_load) {
      entry.placement = Placement::Fallback;
      entry.chosen = least_loaded(out.core_load);
    } else {
      entry.placement = Placement::Similarity;
      entry.chosen = *entry.candidate;
    }

    out.core_load[entry.chosen] += pbu[task];
    max_load = std::max(max_load, out.core_load[entry.chosen]);
    entry.max_load_after = max_load;
    out.trace.push_back(entry);
    if (!commit(ts, out, task, entry.chosen)) return out;
  }
  out.success = true;
  return out;
}

PartitionOutcome allocate_wfd(const TaskSet& ts, std::size_t cores) {
  PartitionOutcome out = start(ts, cores);
  std::vector<double> util;
  for (const Task& t : ts.tasks()) util.push_back(t.utilization());

  for (TaskId task : sorted_by_key_desc(util)) {
    TraceEntry entry;
    entry.task = task;
    entry.chosen = least_loaded(out.core_utilization);
    entry.placement = Placement::WorstFit;
    out.core_load[entry.chosen] += util[task];
    out.trace.push_back(entry);
    if (!commit(ts, out, task, entry.chosen)) return out;
  }
  out.core_load = out.core_utilization;
  out.success = true;
  return out;
}

PartitionOutcome allocate(const TaskSet& ts, std::size_t cores, Algorithm algorithm, double beta) {
  return algorithm == Algorithm::BrWfd ? allocate_brwfd(ts, cores, beta) : allocate_wfd(ts, cores);
}

MinCoresResult min_cores(const TaskSet& ts, Algorithm algorithm, double beta,
                         std::optional<std::size_t> cap) {
  MinCoresResult result;
  // Generated sets hit their target load only to ~1e-9; absorb that before rounding up.
  const double load = ts.total_utilization();
  result.start = static_cast<std::size_t>(std::max(0.0, std::ceil(load - 1e-9)));
  result.cap = cap.value_or(8 * std::max<std::size_t>(result.start, 1));
  if (ts.empty()) {
    result.cores = 0;
    return result;
  }
  for (std::size_t m = std::max<std::size_t>(result.start, 1); m <= result.cap; ++m) {
    if (allocate(ts, m, algorithm, beta).success) {
      result.cores = m;
      return result;
    }
  }
  return result;
}

}  // namespace mpcp
