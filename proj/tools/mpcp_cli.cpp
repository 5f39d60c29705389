// mpcp: task-set generation, MPCP blocking/RTA analysis, partitioning and
// schedulability experiments from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 input-validation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mpcp/experiment.hpp"
#include "mpcp/io.hpp"
#include "mpcp/partition.hpp"
#include "mpcp/report.hpp"
#include "mpcp/taskgen.hpp"

namespace fs = std::filesystem;
using namespace mpcp;

namespace {

constexpr int kUsageError = 1;
constexpr int kInputError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0: command default
  std::vector<double> loads{8.0};
  std::vector<double> cs_ratios{0.12};
  std::vector<double> util_range;
  std::vector<double> utils;
  std::vector<double> core_multiples;
  std::size_t cores = 0;
  std::vector<std::size_t> resources_per_group{5};
  double beta = kDefaultBeta;
  std::vector<std::string> algorithms{"brwfd", "wfd"};
  std::string out;
  std::string format;
  std::string gen_mode = "constrained";
  std::size_t threads = 1;
  bool timing = false;
  std::string input;
  std::string alloc_file;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

GenMode gen_mode(const Options& o) {
  if (o.gen_mode == "constrained") return GenMode::Constrained;
  if (o.gen_mode == "uunifast") return GenMode::UUnifast;
  throw UsageError("--gen-mode must be 'constrained' or 'uunifast'");
}

void apply_util(const Options& o, double& lo, double& hi) {
  if (!o.utils.empty()) {
    lo = hi = o.utils.front();
  } else if (!o.util_range.empty()) {
    if (o.util_range.size() != 2) throw UsageError("--util-range takes two values: lo,hi");
    lo = o.util_range[0];
    hi = o.util_range[1];
  }
}

SweepSpec sweep_spec(const Options& o) {
  SweepSpec spec;
  spec.seed = o.seed;
  spec.trials = o.trials == 0 ? 100 : o.trials;
  spec.loads = o.loads;
  spec.cs_ratios = o.cs_ratios;
  apply_util(o, spec.util_min, spec.util_max);
  spec.utils = o.utils;
  spec.core_multiples = o.core_multiples;
  if (o.cores > 0) spec.cores = o.cores;
  spec.resources_per_group = o.resources_per_group;
  spec.beta = o.beta;
  spec.algorithms.clear();
  for (const auto& a : o.algorithms) {
    try {
      spec.algorithms.push_back(parse_algorithm(a));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  spec.gen_mode = gen_mode(o);
  spec.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  spec.timing = o.timing;
  return spec;
}

int run_gen(const Options& o) {
  GenConfig cfg;
  cfg.total_load = o.loads.front();
  cfg.cs_ratio = o.cs_ratios.front();
  apply_util(o, cfg.util_min, cfg.util_max);
  cfg.resources_per_group = o.resources_per_group.front();
  cfg.mode = gen_mode(o);
  cfg.seed = o.seed;
  const std::size_t trials = o.trials == 0 ? 1 : o.trials;

  if (!o.out.empty()) fs::create_directories(o.out);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Xoshiro256 rng = Xoshiro256::for_trial(o.seed, trial);
    const json doc = task_set_to_json(generate(cfg, rng));
    if (o.out.empty()) {
      std::cout << doc.dump() << '\n';
    } else {
      char name[48];
      std::snprintf(name, sizeof name, "taskset_%04zu.json", trial);
      write_file(fs::path(o.out) / name, doc.dump(2) + "\n");
    }
  }
  return 0;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
}

std::string analysis_csv(const json& report) {
  std::ostringstream out;
  out << "id,priority,core,pgb_low,pgb_high,pbu,dlb,dgb_low,dgb_high,mli,total,wcrt_ms,schedulable\n";
  for (const json& t : report.at("tasks")) {
    out << t.at("id").get<std::size_t>() << ',' << t.at("priority").get<long>() << ',';
    if (t.at("core").is_null()) {
      out << ',' << format_number(t.at("pgb_low").get<double>()) << ','
          << format_number(t.at("pgb_high").get<double>()) << ','
          << format_number(t.at("pbu").get<double>()) << ",,,,,,,\n";
      continue;
    }
    const json& b = t.at("blocking");
    out << t.at("core").get<std::size_t>() << ',' << format_number(t.at("pgb_low").get<double>())
        << ',' << format_number(t.at("pgb_high").get<double>()) << ','
        << format_number(t.at("pbu").get<double>());
    for (const char* k : {"dlb", "dgb_low", "dgb_high", "mli", "total"})
      out << ',' << format_number(b.at(k).get<double>());
    out << ',' << format_number(t.at("wcrt_ms").get<double>()) << ','
        << (t.at("schedulable").get<bool>() ? "true" : "false") << '\n';
  }
  return out.str();
}

int run_analyze(const Options& o) {
  const TaskSet ts = load_task_set(o.input);
  Allocation alloc;
  if (!o.alloc_file.empty()) {
    alloc = read_allocation(ts, read_file(o.alloc_file));
  } else if (ts.empty()) {
    alloc = Allocation(ts, std::max<std::size_t>(o.cores, 1));
  } else {
    std::size_t m = o.cores;
    if (m == 0) {
      const MinCoresResult mc = min_cores(ts, Algorithm::BrWfd, o.beta);
      m = mc.cores.value_or(mc.cap);
    }
    alloc = allocate_brwfd(ts, m, o.beta).allocation;
  }
  const json report = analysis_report(ts, alloc, o.beta);
  if (o.format == "json") {
    emit(o, report.dump(2) + "\n");
  } else if (o.format == "csv") {
    emit(o, analysis_csv(report));
  } else if (o.format.empty() || o.format == "table") {
    emit(o, analysis_table(report));
  } else {
    throw UsageError("--format must be json, csv or table");
  }
  return 0;
}

int run_partition(const Options& o) {
  const TaskSet ts = load_task_set(o.input);
  if (o.algorithms.size() != 1) throw UsageError("partition takes exactly one --algorithms value");
  Algorithm alg;
  try {
    alg = parse_algorithm(o.algorithms.front());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::size_t m = o.cores;
  json extra;
  if (m == 0) {
    const MinCoresResult mc = min_cores(ts, alg, o.beta);
    extra["min_cores"] = mc.cores ? json(*mc.cores) : json(nullptr);
    m = std::max<std::size_t>(1, mc.cores.value_or(mc.cap));
  }
  json doc = partition_to_json(allocate(ts, m, alg, o.beta), alg);
  if (!extra.is_null()) doc["min_cores"] = extra["min_cores"];
  emit(o, doc.dump(2) + "\n");
  return 0;
}

int run_sweep(const Options& o, SweepKind kind) {
  SweepSpec spec = sweep_spec(o);
  if (kind == SweepKind::Ratio) {
    try {
      ratio_axis(spec);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  const SweepResult result = kind == SweepKind::Cores ? sweep_cores(spec) : sweep_ratio(spec);
  const bool as_json = o.format == "json";
  if (!o.format.empty() && o.format != "json" && o.format != "csv")
    throw UsageError("--format must be json or csv");
  const std::string summary = as_json ? summary_json(result).dump(2) + "\n" : summary_csv(result);
  if (o.out.empty()) {
    std::cout << summary;
    return 0;
  }
  fs::create_directories(o.out);
  write_file(fs::path(o.out) / "records.jsonl", records_jsonl(result));
  write_file(fs::path(o.out) / (as_json ? "summary.json" : "summary.csv"), summary);
  write_file(fs::path(o.out) / "meta.json", sweep_metadata(spec, result).dump(2) + "\n");
  std::cout << summary;
  return 0;
}

void add_generation_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Experiment seed");
  cmd->add_option("--trials", o.trials, "Task sets per configuration point");
  cmd->add_option("--load", o.loads, "System total load S (comma-separated list)")->delimiter(',');
  cmd->add_option("--cs-ratio", o.cs_ratios, "Critical-section ratio (list)")->delimiter(',');
  cmd->add_option("--util-range", o.util_range, "Per-task utilization range lo,hi")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--util", o.utils, "Fixed per-task utilization (list)")->delimiter(',');
  cmd->add_option("--resources-per-group", o.resources_per_group, "Resources per group (list)")
      ->delimiter(',');
  cmd->add_option("--gen-mode", o.gen_mode, "constrained | uunifast");
  cmd->add_option("--out", o.out, "Output directory");
}

void add_sweep_flags(CLI::App* cmd, Options& o) {
  add_generation_flags(cmd, o);
  cmd->add_option("--core-multiple", o.core_multiples, "Core multiple mu, cores = ceil(mu*S)")
      ->delimiter(',');
  cmd->add_option("--cores", o.cores, "Fixed core count (ratio sweeps)");
  cmd->add_option("--beta", o.beta, "PBU blocking weight");
  cmd->add_option("--algorithms", o.algorithms, "brwfd,wfd")->delimiter(',');
  cmd->add_option("--format", o.format, "Summary format: csv | json");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  cmd->add_flag("--timing", o.timing, "Add wall-clock time to every record");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPCP blocking analysis, BR-WFD/WFD partitioning and schedulability experiments"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Generate synthetic task sets");
  add_generation_flags(gen, o);

  auto* analyze = app.add_subcommand("analyze", "Blocking, PBU and WCRT report for a task set");
  analyze->add_option("file", o.input, "Task-set JSON")->required();
  analyze->add_option("--alloc", o.alloc_file, "Allocation JSON (default: fresh BR-WFD run)");
  analyze->add_option("--cores", o.cores, "Core count for the BR-WFD run (default: minimum)");
  analyze->add_option("--beta", o.beta, "PBU blocking weight");
  analyze->add_option("--format", o.format, "table | json | csv");
  analyze->add_option("--out", o.out, "Output file");

  auto* partition = app.add_subcommand("partition", "Partition a task set onto cores");
  partition->add_option("file", o.input, "Task-set JSON")->required();
  partition->add_option("--cores", o.cores, "Core count (default: minimum feasible)");
  partition->add_option("--algorithms", o.algorithms, "brwfd | wfd");
  partition->add_option("--beta", o.beta, "PBU blocking weight");
  partition->add_option("--format", o.format, "json");
  partition->add_option("--out", o.out, "Output file");

  auto* cores = app.add_subcommand("sweep-cores", "Minimum-core study over load x cs-ratio");
  add_sweep_flags(cores, o);
  auto* ratio = app.add_subcommand("sweep-ratio", "Schedulable-ratio study along one axis");
  add_sweep_flags(ratio, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  // `partition` defaults to a single algorithm.
  if (partition->parsed() && partition->count("--algorithms") == 0) o.algorithms = {"brwfd"};

  try {
    if (gen->parsed()) return run_gen(o);
    if (analyze->parsed()) return run_analyze(o);
    if (partition->parsed()) return run_partition(o);
    if (cores->parsed()) return run_sweep(o, SweepKind::Cores);
    if (ratio->parsed()) return run_sweep(o, SweepKind::Ratio);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kUsageError;
}
