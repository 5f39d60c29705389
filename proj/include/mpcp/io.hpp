#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "mpcp/model.hpp"

namespace mpcp {

using json = nlohmann::ordered_json;

/// Parses the task-set interchange document. Syntax errors and invariant
/// violations are both reported as ValidationError carrying the 1-based line
/// of the offending value.
TaskSet read_task_set(std::string_view text);
TaskSet load_task_set(const std::string& path);

json task_set_to_json(const TaskSet& ts);

/// {"core_count": m, "cores": [[task ids...], ...]}. Extra keys are ignored,
/// so a partition result document is accepted as-is.
Allocation read_allocation(const TaskSet& ts, std::string_view text);
json allocation_to_json(const Allocation& alloc);

/// 1-based line on which the value addressed by `pointer` starts. Falls back
/// to the deepest existing ancestor; returns 0 if nothing matches.
std::size_t line_of_pointer(std::string_view text, std::string_view pointer);

std::string read_file(const std::string& path);

}  // namespace mpcp
