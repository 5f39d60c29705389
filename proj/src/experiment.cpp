#include "mpcp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mpcp/rta.hpp"

namespace mpcp {

namespace {

std::size_t ceil_cores(double x) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(x - 1e-9)));
}

std::string kind_name(SweepKind k) { return k == SweepKind::Cores ? "cores" : "ratio"; }

std::vector<Algorithm> ordered_algorithms(std::vector<Algorithm> algs) {
  std::sort(algs.begin(), algs.end());
  algs.erase(std::unique(algs.begin(), algs.end()), algs.end());
  return algs;
}

// Runs fn(job) for job in [0, jobs) on `threads` workers; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t jobs, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, jobs));
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t j; (j = next.fetch_add(1)) < jobs;) {
        try {
          fn(j);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = jobs;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SweepResult run(const SweepSpec& spec, SweepKind kind, std::vector<ConfigPoint> points,
                std::string axis) {
  SweepResult result;
  result.kind = kind;
  result.axis = std::move(axis);
  result.points = std::move(points);

  const auto algs = ordered_algorithms(spec.algorithms);
  const std::size_t jobs = result.points.size() * spec.trials;
  result.records.resize(jobs * algs.size());

  parallel_for(jobs, spec.threads, [&](std::size_t job) {
    const std::size_t point = job / spec.trials;
    const std::size_t trial = job % spec.trials;
    const ConfigPoint& cp = result.points[point];
    Xoshiro256 rng = Xoshiro256::for_trial(spec.seed, trial);
    const TaskSet ts = generate(cp.gen_config(spec.gen_mode), rng);

    for (std::size_t a = 0; a < algs.size(); ++a) {
      ExperimentRecord& rec = result.records[job * algs.size() + a];
      rec.point = point;
      rec.seed = spec.seed;
      rec.trial = trial;
      rec.algorithm = algs[a];
      const auto t0 = std::chrono::steady_clock::now();
      if (kind == SweepKind::Cores) {
        rec.cores_required = min_cores(ts, algs[a], spec.beta).cores;
      } else {
        rec.schedulable = allocate(ts, *cp.cores, algs[a], spec.beta).success;
      }
      if (spec.timing)
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                          .count();
    }
  });
  return result;
}

ConfigPoint base_point(const SweepSpec& spec) {
  ConfigPoint p;
  p.load = spec.loads.front();
  p.cs_ratio = spec.cs_ratios.front();
  p.util_min = spec.util_min;
  p.util_max = spec.util_max;
  if (!spec.utils.empty()) p.util_min = p.util_max = spec.utils.front();
  p.resources_per_group = spec.resources_per_group.front();
  return p;
}

void assign_cores(const SweepSpec& spec, ConfigPoint& p) {
  if (!spec.core_multiples.empty()) {
    if (!p.core_multiple) p.core_multiple = spec.core_multiples.front();
    p.cores = ceil_cores(*p.core_multiple * p.load);
  } else {
    p.cores = spec.cores.value_or(2 * ceil_cores(p.load));
  }
}

std::string number_or_empty(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

GenConfig ConfigPoint::gen_config(GenMode mode) const {
  GenConfig cfg;
  cfg.total_load = load;
  cfg.cs_ratio = cs_ratio;
  cfg.util_min = util_min;
  cfg.util_max = util_max;
  cfg.resources_per_group = resources_per_group;
  cfg.mode = mode;
  return cfg;
}

void SweepSpec::validate() const {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (algorithms.empty()) throw ConfigError("at least one algorithm is required");
  if (loads.empty() || cs_ratios.empty() || resources_per_group.empty())
    throw ConfigError("axis lists must not be empty");
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0; });
  };
  if (!positive(loads) || !positive(utils) || !positive(core_multiples))
    throw ConfigError("axis values must be positive");
  if (!std::all_of(cs_ratios.begin(), cs_ratios.end(), [](double x) { return x >= 0; }))
    throw ConfigError("critical-section ratios must be non-negative");
  if (std::find(resources_per_group.begin(), resources_per_group.end(), 0u) !=
      resources_per_group.end())
    throw ConfigError("resources per group must be positive");
  if (cores && *cores == 0) throw ConfigError("cores must be positive");
  if (!(beta >= 0)) throw ConfigError("beta must be non-negative");
}

std::string ratio_axis(const SweepSpec& spec) {
  std::vector<std::string> varying;
  if (spec.loads.size() > 1) varying.push_back("load");
  if (spec.cs_ratios.size() > 1) varying.push_back("cs_ratio");
  if (spec.utils.size() > 1) varying.push_back("util");
  if (spec.core_multiples.size() > 1) varying.push_back("core_multiple");
  if (spec.resources_per_group.size() > 1) varying.push_back("resources_per_group");
  if (varying.size() > 1)
    throw ConfigError("a ratio sweep varies exactly one axis (got " + varying[0] + " and " +
                      varying[1] + ")");
  if (varying.empty()) return "cs_ratio";
  return varying.front();
}

SweepResult sweep_cores(const SweepSpec& spec) {
  spec.validate();
  std::vector<ConfigPoint> points;
  for (double load : spec.loads) {
    for (double cs : spec.cs_ratios) {
      ConfigPoint p = base_point(spec);
      p.load = load;
      p.cs_ratio = cs;
      points.push_back(p);
    }
  }
  return run(spec, SweepKind::Cores, std::move(points), "");
}

SweepResult sweep_ratio(const SweepSpec& spec) {
  spec.validate();
  const std::string axis = ratio_axis(spec);
  std::vector<ConfigPoint> points;
  auto push = [&](ConfigPoint p) {
    assign_cores(spec, p);
    points.push_back(p);
  };
  const ConfigPoint base = base_point(spec);
  if (axis == "load") {
    for (double v : spec.loads) push([&] { auto p = base; p.load = v; return p; }());
  } else if (axis == "cs_ratio") {
    for (double v : spec.cs_ratios) push([&] { auto p = base; p.cs_ratio = v; return p; }());
  } else if (axis == "util") {
    for (double v : spec.utils)
      push([&] { auto p = base; p.util_min = p.util_max = v; return p; }());
  } else if (axis == "core_multiple") {
    for (double v : spec.core_multiples)
      push([&] { auto p = base; p.core_multiple = v; return p; }());
  } else {
    for (std::size_t v : spec.resources_per_group)
      push([&] { auto p = base; p.resources_per_group = v; return p; }());
  }
  return run(spec, SweepKind::Ratio, std::move(points), axis);
}

std::vector<SummaryRow> summarize(const SweepResult& result) {
  struct Tally {
    double sum = 0;
    std::size_t ok = 0;
    std::size_t failed = 0;
  };
  // (point, trial) -> cores per algorithm, for paired reduction statistics.
  std::map<std::pair<std::size_t, std::size_t>, std::map<Algorithm, std::optional<std::size_t>>>
      paired;
  std::map<std::pair<std::size_t, Algorithm>, Tally> tallies;

  for (const ExperimentRecord& r : result.records) {
    Tally& t = tallies[{r.point, r.algorithm}];
    if (result.kind == SweepKind::Cores) {
      if (r.cores_required) {
        t.sum += static_cast<double>(*r.cores_required);
        ++t.ok;
      } else {
        ++t.failed;
      }
      paired[{r.point, r.trial}][r.algorithm] = r.cores_required;
    } else {
      r.schedulable ? ++t.ok : ++t.failed;
    }
  }

  std::vector<SummaryRow> rows;
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    bool has_br = false, has_wfd = false;
    for (Algorithm a : {Algorithm::BrWfd, Algorithm::Wfd}) {
      auto it = tallies.find({p, a});
      if (it == tallies.end()) continue;
      (a == Algorithm::BrWfd ? has_br : has_wfd) = true;
      const Tally& t = it->second;
      SummaryRow row;
      row.point = p;
      row.algorithm = to_string(a);
      if (result.kind == SweepKind::Cores) {
        row.metric = "mean_cores";
        row.value = t.ok ? t.sum / static_cast<double>(t.ok) : 0.0;
        row.n_trials = t.ok;
      } else {
        row.metric = "schedulable_ratio";
        row.value = static_cast<double>(t.ok) / static_cast<double>(t.ok + t.failed);
        row.n_trials = t.ok + t.failed;
      }
      row.n_failures = t.failed;
      rows.push_back(row);
    }
    if (result.kind == SweepKind::Cores && has_br && has_wfd) {
      double br = 0, wfd = 0;
      std::size_t pairs = 0, unpaired = 0;
      for (const auto& [key, by_alg] : paired) {
        if (key.first != p) continue;
        const auto& b = by_alg.at(Algorithm::BrWfd);
        const auto& w = by_alg.at(Algorithm::Wfd);
        if (b && w) {
          br += static_cast<double>(*b);
          wfd += static_cast<double>(*w);
          ++pairs;
        } else {
          ++unpaired;
        }
      }
      SummaryRow row;
      row.point = p;
      row.algorithm = "brwfd_vs_wfd";
      row.metric = "reduction_pct";
      row.value = wfd > 0 ? (wfd - br) / wfd * 100.0 : 0.0;
      row.n_trials = pairs;
      row.n_failures = unpaired;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string summary_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "load,cs_ratio,util_min,util_max,resources_per_group,core_multiple,cores,"
         "algorithm,metric,value,n_trials,n_failures\n";
  for (const SummaryRow& row : summarize(result)) {
    const ConfigPoint& p = result.points[row.point];
    out << format_number(p.load) << ',' << format_number(p.cs_ratio) << ','
        << format_number(p.util_min) << ',' << format_number(p.util_max) << ','
        << p.resources_per_group << ',' << number_or_empty(p.core_multiple) << ','
        << (p.cores ? std::to_string(*p.cores) : std::string()) << ',' << row.algorithm << ','
        << row.metric << ',' << format_number(row.value) << ',' << row.n_trials << ','
        << row.n_failures << '\n';
  }
  return out.str();
}

json point_to_json(const ConfigPoint& p) {
  json j{{"load", p.load},
         {"cs_ratio", p.cs_ratio},
         {"util_min", p.util_min},
         {"util_max", p.util_max},
         {"resources_per_group", p.resources_per_group}};
  if (p.core_multiple) j["core_multiple"] = *p.core_multiple;
  if (p.cores) j["cores"] = *p.cores;
  return j;
}

json summary_json(const SweepResult& result) {
  json rows = json::array();
  for (const SummaryRow& row : summarize(result)) {
    rows.push_back({{"point", point_to_json(result.points[row.point])},
                    {"algorithm", row.algorithm},
                    {"metric", row.metric},
                    {"value", row.value},
                    {"n_trials", row.n_trials},
                    {"n_failures", row.n_failures}});
  }
  return rows;
}

json record_to_json(const SweepResult& result, const ExperimentRecord& rec) {
  json j;
  j["sweep"] = kind_name(result.kind);
  if (result.kind == SweepKind::Ratio) j["axis"] = result.axis;
  j["point"] = point_to_json(result.points.at(rec.point));
  j["seed"] = rec.seed;
  j["trial"] = rec.trial;
  j["algorithm"] = to_string(rec.algorithm);
  if (result.kind == SweepKind::Cores) {
    if (rec.cores_required) {
      j["cores_required"] = *rec.cores_required;
    } else {
      j["cores_required"] = nullptr;
      j["status"] = "not_schedulable_within_cap";
    }
  } else {
    j["schedulable"] = rec.schedulable;
  }
  if (rec.wall_ms) j["wall_ms"] = *rec.wall_ms;
  return j;
}

std::string records_jsonl(const SweepResult& result) {
  std::string out;
  for (const ExperimentRecord& rec : result.records) {
    out += record_to_json(result, rec).dump();
    out += '\n';
  }
  return out;
}

SweepResult parse_records_jsonl(std::string_view text) {
  SweepResult result;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (first) {
      result.kind = j.at("sweep").get<std::string>() == "cores" ? SweepKind::Cores : SweepKind::Ratio;
      if (j.contains("axis")) result.axis = j.at("axis").get<std::string>();
      first = false;
    }
    const json& pj = j.at("point");
    ConfigPoint p;
    p.load = pj.at("load").get<double>();
    p.cs_ratio = pj.at("cs_ratio").get<double>();
    p.util_min = pj.at("util_min").get<double>();
    p.util_max = pj.at("util_max").get<double>();
    p.resources_per_group = pj.at("resources_per_group").get<std::size_t>();
    if (pj.contains("core_multiple")) p.core_multiple = pj.at("core_multiple").get<double>();
    if (pj.contains("cores")) p.cores = pj.at("cores").get<std::size_t>();

    auto it = std::find(result.points.begin(), result.points.end(), p);
    ExperimentRecord rec;
    rec.point = static_cast<std::size_t>(it - result.points.begin());
    if (it == result.points.end()) result.points.push_back(p);
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.trial = j.at("trial").get<std::size_t>();
    rec.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    if (result.kind == SweepKind::Cores) {
      if (!j.at("cores_required").is_null()) rec.cores_required = j.at("cores_required").get<std::size_t>();
    } else {
      rec.schedulable = j.at("schedulable").get<bool>();
    }
    if (j.contains("wall_ms")) rec.wall_ms = j.at("wall_ms").get<double>();
    result.records.push_back(rec);
  }
  return result;
}

json sweep_metadata(const SweepSpec& spec, const SweepResult& result) {
  json algs = json::array();
  for (Algorithm a : ordered_algorithms(spec.algorithms)) algs.push_back(to_string(a));
  json meta{{"sweep", kind_name(result.kind)},
            {"seed", spec.seed},
            {"trials", spec.trials},
            {"beta", spec.beta},
            {"algorithms", algs},
            {"gen_mode", spec.gen_mode == GenMode::Constrained ? "constrained" : "uunifast"},
            {"points", result.points.size()}};
  if (result.kind == SweepKind::Ratio) {
    meta["axis"] = result.axis;
    if (!spec.core_multiples.empty()) {
      meta["core_multiple_definition"] =
          "cores = ceil(core_multiple * load); larger multiples mean more cores";
    } else {
      meta["cores_definition"] = spec.cores ? "fixed by --cores" : "2 * ceil(load)";
    }
  } else {
    meta["min_cores_search"] = "start at ceil(total utilization), cap 8 * max(start, 1)";
  }
  return meta;
}

}  // namespace mpcp
