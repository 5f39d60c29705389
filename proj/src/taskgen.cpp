#include "mpcp/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mpcp {

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += kGoldenGamma);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

Xoshiro256 Xoshiro256::for_trial(std::uint64_t seed, std::uint64_t trial) {
  // Stream seed = SplitMix64 output at position `trial` of the sequence seeded by `seed`.
  SplitMix64 sm(seed + trial * kGoldenGamma);
  return Xoshiro256(sm.next());
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Xoshiro256::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next();
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + x % span;
}

void GenConfig::validate() const {
  if (!(total_load > 0)) throw ConfigError("total load must be positive");
  if (!(wcet_min > 0) || wcet_max < wcet_min) throw ConfigError("invalid wcet range");
  if (!(util_min > 0) || util_max < util_min || util_max > 1)
    throw ConfigError("utilization range must lie within (0, 1]");
  if (sections_min > sections_max) throw ConfigError("invalid section count range");
  if (resources_per_group == 0 || tasks_per_group == 0)
    throw ConfigError("group sizes must be positive");
  if (cs_ratio < 0) throw ConfigError("critical-section ratio must be non-negative");
  if (cs_ratio * static_cast<double>(sections_max) > 1)
    throw ConfigError("critical sections would exceed the task wcet");
}

std::size_t GenConfig::task_count() const {
  const double n = std::round(total_load / (0.5 * (util_min + util_max)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

std::vector<double> constrained_uunifast(double total, std::size_t n, double lo, double hi,
                                         Xoshiro256& rng) {
  const double slack = 1e-12 * std::max(1.0, total);
  if (n == 0 || total < static_cast<double>(n) * lo - slack ||
      total > static_cast<double>(n) * hi + slack)
    throw InfeasibleError("cannot split load " + std::to_string(total) + " into " +
                          std::to_string(n) + " values within [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");

  std::vector<double> u(n);
  for (double& x : u) x = rng.uniform(lo, hi);
  const double scale = total / std::accumulate(u.begin(), u.end(), 0.0);
  for (double& x : u) x *= scale;

  // Each pass pins at least one more value to a bound, so n + 1 passes suffice.
  for (std::size_t pass = 0; pass <= n + 1; ++pass) {
    for (double& x : u) x = std::clamp(x, lo, hi);
    const double residual = total - std::accumulate(u.begin(), u.end(), 0.0);
    if (std::abs(residual) <= slack) break;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
      if (residual > 0 ? u[i] < hi : u[i] > lo) free.push_back(i);
    if (free.empty()) break;
    const double share = residual / static_cast<double>(free.size());
    for (std::size_t i : free) u[i] += share;
  }
  return u;
}

std::vector<double> uunifast(double total, std::size_t n, Xoshiro256& rng) {
  std::vector<double> u;
  u.reserve(n);
  double remaining = total;
  for (std::size_t i = 1; i < n; ++i) {
    const double next = remaining * std::pow(rng.uniform(), 1.0 / static_cast<double>(n - i));
    u.push_back(remaining - next);
    remaining = next;
  }
  if (n > 0) u.push_back(remaining);
  return u;
}

TaskSet generate(const GenConfig& cfg, Xoshiro256& rng) {
  cfg.validate();
  const std::size_t n = cfg.task_count();

  std::vector<double> util;
  if (cfg.mode == GenMode::UUnifast) {
    // Discard draws with a task above full utilization.
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw InfeasibleError("UUnifast kept producing utilizations above 1");
      util = uunifast(cfg.total_load, n, rng);
      if (std::all_of(util.begin(), util.end(), [](double x) { return x > 0 && x <= 1; })) break;
    }
  } else {
    double target = cfg.total_load;
    // A degenerate range fixes every value, so the load is n * u by construction.
    if (cfg.util_min == cfg.util_max) target = static_cast<double>(n) * cfg.util_min;
    util = constrained_uunifast(target, n, cfg.util_min, cfg.util_max, rng);
  }

  const std::size_t group_count = (n + cfg.tasks_per_group - 1) / cfg.tasks_per_group;
  const std::size_t q = group_count * cfg.resources_per_group;

  std::vector<Task> tasks(n);
  for (std::size_t i = 0; i < n; ++i) {
    Task& t = tasks[i];
    t.id = i;
    t.wcet = rng.uniform(cfg.wcet_min, cfg.wcet_max);
    t.period = t.wcet / util[i];
    t.deadline = t.period;
    const std::size_t sections = rng.uniform_int(cfg.sections_min, cfg.sections_max);
    const std::size_t first = (i / cfg.tasks_per_group) * cfg.resources_per_group;
    for (std::size_t s = 0; s < sections; ++s) {
      const ResourceId r = first + rng.uniform_int(0, cfg.resources_per_group - 1);
      t.sections.push_back({r, t.wcet * cfg.cs_ratio});
    }
  }

  // Rate-monotonic: shorter period, higher priority; equal periods by lower id.
  std::vector<TaskId> order(n);
  std::iota(order.begin(), order.end(), TaskId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](TaskId a, TaskId b) { return tasks[a].period < tasks[b].period; });
  for (std::size_t rank = 0; rank < n; ++rank)
    tasks[order[rank]].priority = static_cast<Priority>(n - rank);

  std::vector<std::size_t> groups(q);
  for (ResourceId r = 0; r < q; ++r) groups[r] = r / cfg.resources_per_group;

  return TaskSet(std::move(tasks), q, std::move(groups));
}

TaskSet generate(const GenConfig& cfg) {
  Xoshiro256 rng(cfg.seed);
  return generate(cfg, rng);
}

}  // namespace mpcp
