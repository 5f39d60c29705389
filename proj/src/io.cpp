#include "mpcp/io.hpp"

#include <fstream>
#include <sstream>

namespace mpcp {

namespace {

// Minimal structural walk over already well-formed JSON, recording where each
// value starts. Only used to decorate error messages.
class PointerLocator {
 public:
  PointerLocator(std::string_view text, std::string_view target) : text_(text), target_(target) {}

  std::size_t run() {
    skip_ws();
    value("");
    return best_line_;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') ++line_;
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
      ++pos_;
    }
  }

  bool is_prefix(const std::string& p) const {
    if (p.size() > target_.size() || target_.compare(0, p.size(), p) != 0) return false;
    return p.size() == target_.size() || target_[p.size()] == '/';
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& ptr) {
    if (pos_ >= text_.size() || done_) return;
    if (is_prefix(ptr) && ptr.size() >= best_len_) {
      best_len_ = ptr.size();
      best_line_ = line_;
      if (ptr.size() == target_.size()) done_ = true;
    }
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}' && !done_) {
        std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(ptr + "/" + key);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      std::size_t index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']' && !done_) {
        value(ptr + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '}' &&
             text_[pos_] != ']' && text_[pos_] != ' ' && text_[pos_] != '\n' &&
             text_[pos_] != '\r' && text_[pos_] != '\t')
        ++pos_;
    }
  }

  std::string_view text_;
  std::string_view target_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t best_len_ = 0;
  std::size_t best_line_ = 0;
  bool done_ = false;
};

const json& require(const json& obj, const char* key, const std::string& ptr) {
  if (!obj.is_object()) throw ValidationError("expected an object", ptr);
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + key + "'", ptr);
  return *it;
}

double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw ValidationError("expected a number", ptr);
  return v.get<double>();
}

std::size_t index_value(const json& v, const std::string& ptr) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ValidationError("expected a non-negative integer", ptr);
  return v.get<std::size_t>();
}

TaskSet parse_task_set(const json& doc) {
  const std::size_t q = index_value(require(doc, "resource_count", ""), "/resource_count");
  const json& tasks = require(doc, "tasks", "");
  if (!tasks.is_array()) throw ValidationError("expected an array", "/tasks");

  std::vector<Task> out;
  out.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string p = "/tasks/" + std::to_string(i);
    const json& t = tasks[i];
    Task task;
    task.id = index_value(require(t, "id", p), p + "/id");
    task.wcet = number(require(t, "wcet_ms", p), p + "/wcet_ms");
    task.period = number(require(t, "period_ms", p), p + "/period_ms");
    task.deadline = task.period;
    if (auto it = t.find("deadline_ms"); it != t.end())
      task.deadline = number(*it, p + "/deadline_ms");
    const json& prio = require(t, "priority", p);
    if (!prio.is_number_integer()) throw ValidationError("expected an integer", p + "/priority");
    task.priority = prio.get<Priority>();
    if (auto it = t.find("sections"); it != t.end()) {
      if (!it->is_array()) throw ValidationError("expected an array", p + "/sections");
      for (std::size_t s = 0; s < it->size(); ++s) {
        const std::string sp = p + "/sections/" + std::to_string(s);
        const json& sec = (*it)[s];
        task.sections.push_back(
            {index_value(require(sec, "resource", sp), sp + "/resource"),
             number(require(sec, "duration_ms", sp), sp + "/duration_ms")});
      }
    }
    out.push_back(std::move(task));
  }

  std::optional<std::vector<std::size_t>> groups;
  if (auto it = doc.find("groups"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("expected an array", "/groups");
    groups.emplace();
    for (std::size_t g = 0; g < it->size(); ++g)
      groups->push_back(index_value((*it)[g], "/groups/" + std::to_string(g)));
  }
  return TaskSet(std::move(out), q, std::move(groups));
}

}  // namespace

std::size_t line_of_pointer(std::string_view text, std::string_view pointer) {
  return PointerLocator(text, pointer).run();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TaskSet read_task_set(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ValidationError(std::string("malformed JSON: ") + e.what(), {}, line);
  }
  try {
    return parse_task_set(doc);
  } catch (const ValidationError& e) {
    if (e.line() != 0) throw;
    std::size_t line = line_of_pointer(text, e.pointer());
    throw ValidationError(e.what(), e.pointer(), line == 0 ? 1 : line);
  } catch (const json::exception& e) {
    throw ValidationError(e.what(), {}, 1);
  }
}

TaskSet load_task_set(const std::string& path) { return read_task_set(read_file(path)); }

json task_set_to_json(const TaskSet& ts) {
  json doc;
  doc["resource_count"] = ts.resource_count();
  json tasks = json::array();
  for (const Task& t : ts.tasks()) {
    json sections = json::array();
    for (const CriticalSection& cs : t.sections)
      sections.push_back({{"resource", cs.resource}, {"duration_ms", cs.duration}});
    tasks.push_back({{"id", t.id},
                     {"wcet_ms", t.wcet},
                     {"period_ms", t.period},
                     {"priority", t.priority},
                     {"sections", std::move(sections)}});
  }
  doc["tasks"] = std::move(tasks);
  if (ts.groups()) doc["groups"] = *ts.groups();
  return doc;
}

Allocation read_allocation(const TaskSet& ts, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed allocation JSON: ") + e.what());
  }
  const std::size_t m = index_value(require(doc, "core_count", ""), "/core_count");
  const json& cores = require(doc, "cores", "");
  if (!cores.is_array()) throw ValidationError("expected an array", "/cores");
  std::vector<std::vector<TaskId>> lists;
  for (std::size_t c = 0; c < cores.size(); ++c) {
    const std::string p = "/cores/" + std::to_string(c);
    if (!cores[c].is_array()) throw ValidationError("expected an array", p);
    auto& list = lists.emplace_back();
    for (std::size_t k = 0; k < cores[c].size(); ++k)
      list.push_back(index_value(cores[c][k], p + "/" + std::to_string(k)));
  }
  return Allocation::from_cores(ts, m, lists);
}

json allocation_to_json(const Allocation& alloc) {
  json cores = json::array();
  for (CoreId c = 0; c < alloc.core_count(); ++c) {
    auto tasks = alloc.tasks_on(c);
    cores.push_back(std::vector<TaskId>(tasks.begin(), tasks.end()));
  }
  return json{{"core_count", alloc.core_count()}, {"cores", std::move(cores)}};
}

}  // namespace mpcp
