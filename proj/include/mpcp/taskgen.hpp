#pragma once

#include <cstdint>
#include <vector>

#include "mpcp/model.hpp"

namespace mpcp {

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// SplitMix64; used to expand user seeds into generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0, seeded from four SplitMix64 outputs.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  /// Independent stream for one trial of an experiment.
  static Xoshiro256 for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

 private:
  std::uint64_t s_[4];
};

enum class GenMode {
  Constrained,  // uniform draw, rescale to the target sum, clamp-and-redistribute repair
  UUnifast,     // classic UUnifast, range ignored
};

struct GenConfig {
  double total_load = 8.0;
  double wcet_min = 20.0;
  double wcet_max = 100.0;
  double util_min = 0.10;
  double util_max = 0.15;
  std::size_t sections_min = 2;
  std::size_t sections_max = 3;
  std::size_t resources_per_group = 5;
  std::size_t tasks_per_group = 15;
  double cs_ratio = 0.12;
  std::uint64_t seed = 1;
  GenMode mode = GenMode::Constrained;

  /// Throws ConfigError.
  void validate() const;
  /// round(S / midpoint(util range)).
  std::size_t task_count() const;
};

/// n utilizations summing to `total` with each value inside [lo, hi].
/// Throws InfeasibleError unless n*lo <= total <= n*hi.
std::vector<double> constrained_uunifast(double total, std::size_t n, double lo, double hi,
                                         Xoshiro256& rng);

/// Classic UUnifast (Bini & Buttazzo); values may fall anywhere in (0, total).
std::vector<double> uunifast(double total, std::size_t n, Xoshiro256& rng);

TaskSet generate(const GenConfig& cfg, Xoshiro256& rng);
/// Uses Xoshiro256(cfg.seed).
TaskSet generate(const GenConfig& cfg);

}  // namespace mpcp
