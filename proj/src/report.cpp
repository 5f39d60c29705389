#include "mpcp/report.hpp"

#include <cstdio>

namespace mpcp {

json blocking_to_json(const BlockingBreakdown& b) {
  return json{{"dlb", b.dlb},
              {"dgb_low", b.dgb_low},
              {"dgb_high", b.dgb_high},
              {"mli", b.mli},
              {"total", b.total}};
}

json rta_to_json(const RtaResult& r) {
  json tasks = json::array();
  for (const auto& [id, v] : r.per_task)
    tasks.push_back({{"id", id},
                     {"wcrt_ms", v.wcrt},
                     {"blocking", blocking_to_json(v.blocking)},
                     {"schedulable", v.schedulable}});
  json out{{"verdict", r.schedulable() ? "schedulable" : "unschedulable"}};
  if (r.first_failure) out["first_failure"] = *r.first_failure;
  out["tasks"] = std::move(tasks);
  return out;
}

json partition_to_json(const PartitionOutcome& outcome, Algorithm algorithm) {
  json out = allocation_to_json(outcome.allocation);
  out["algorithm"] = to_string(algorithm);
  out["verdict"] = outcome.success ? "schedulable" : "unschedulable";
  if (outcome.failed_task) {
    out["failure"] = "rta_fail";
    out["failed_task"] = *outcome.failed_task;
  }
  out["utilization"] = outcome.core_utilization;
  out["blocking_load"] = outcome.core_load;
  json trace = json::array();
  for (const TraceEntry& e : outcome.trace) {
    json step{{"task", e.task}};
    step["candidate"] = e.candidate ? json(*e.candidate) : json(nullptr);
    step["chosen"] = e.chosen;
    step["placement"] = to_string(e.placement);
    step["fallback"] = e.placement == Placement::Fallback;
    if (algorithm == Algorithm::BrWfd) step["max_load"] = e.max_load_after;
    trace.push_back(std::move(step));
  }
  out["trace"] = std::move(trace);
  return out;
}

json analysis_report(const TaskSet& ts, const Allocation& alloc, double beta) {
  const PbuTable pbu = pbu_table(ts, beta);
  const RtaResult rta = is_schedulable(ts, alloc);

  json tasks = json::array();
  for (const Task& t : ts.tasks()) {
    const PbuEntry& e = pbu.tasks[t.id];
    json row{{"id", t.id},
             {"priority", t.priority},
             {"pgb_low", e.pgb_low},
             {"pgb_high", e.pgb_high},
             {"pbu", e.pbu}};
    if (auto core = alloc.core_of(t.id)) {
      const TaskVerdict& v = rta.per_task.at(t.id);
      row["core"] = *core;
      row["blocking"] = blocking_to_json(v.blocking);
      row["wcrt_ms"] = v.wcrt;
      row["deadline_ms"] = t.deadline;
      row["schedulable"] = v.schedulable;
    } else {
      row["core"] = nullptr;
    }
    tasks.push_back(std::move(row));
  }
  json out{{"beta", beta}, {"allocation", allocation_to_json(alloc)}};
  out["verdict"] = rta.schedulable() ? "schedulable" : "unschedulable";
  if (rta.first_failure) out["first_failure"] = *rta.first_failure;
  out["tasks"] = std::move(tasks);
  return out;
}

std::string analysis_table(const json& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%4s %4s %4s %9s %9s %9s %9s %9s %10s %10s %s\n", "id", "prio",
                "core", "pbu", "dlb", "dgb_low", "dgb_high", "mli", "wcrt", "deadline", "ok");
  out += line;
  for (const json& t : report.at("tasks")) {
    if (t.at("core").is_null()) {
      std::snprintf(line, sizeof line, "%4zu %4ld %4s %9.4f\n", t.at("id").get<std::size_t>(),
                    t.at("priority").get<long>(), "-", t.at("pbu").get<double>());
      out += line;
      continue;
    }
    const json& b = t.at("blocking");
    std::snprintf(line, sizeof line, "%4zu %4ld %4zu %9.4f %9.4f %9.4f %9.4f %9.4f %10.4f %10.4f %s\n",
                  t.at("id").get<std::size_t>(), t.at("priority").get<long>(),
                  t.at("core").get<std::size_t>(), t.at("pbu").get<double>(),
                  b.at("dlb").get<double>(), b.at("dgb_low").get<double>(),
                  b.at("dgb_high").get<double>(), b.at("mli").get<double>(),
                  t.at("wcrt_ms").get<double>(), t.at("deadline_ms").get<double>(),
                  t.at("schedulable").get<bool>() ? "yes" : "MISS");
    out += line;
  }
  out += "verdict: " + report.at("verdict").get<std::string>() + "\n";
  return out;
}

}  // namespace mpcp
