#pragma once

#include <string>

#include "mpcp/blocking.hpp"
#include "mpcp/io.hpp"
#include "mpcp/partition.hpp"
#include "mpcp/rta.hpp"

namespace mpcp {

json blocking_to_json(const BlockingBreakdown& b);
json rta_to_json(const RtaResult& r);

/// Per-core task lists, U^j, BU^j, the allocation trace and the verdict.
json partition_to_json(const PartitionOutcome& outcome, Algorithm algorithm);

/// Per-task PBU terms, blocking breakdown, WCRT and the overall verdict for
/// the given allocation.
json analysis_report(const TaskSet& ts, const Allocation& alloc, double beta);

/// Fixed-width table rendering of analysis_report.
std::string analysis_table(const json& report);

}  // namespace mpcp
