#include "worldforge/task_spec.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "worldforge/diagnostics.hpp"

namespace worldforge {

using nlohmann::json;

std::string normalizeName(std::string_view text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else
      lowered += ' ';
  }
  std::istringstream in(lowered);
  std::string word, out;
  while (in >> word) {
    if (word.size() > 3) {
      size_t end = word.size();
      while (end > 0 && word[end - 1] == 's') --end;
      word.resize(end);
    }
    if (word.empty()) continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

namespace {

std::vector<std::string> stringArray(const json& j, const std::string& field) {
  if (!j.contains(field))
    throw SpecFormatError(field, "missing required field");
  const json& arr = j.at(field);
  if (!arr.is_array()) throw SpecFormatError(field, "must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string()) throw SpecFormatError(field, "must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

void requireUnique(const std::vector<std::string>& items, const std::string& field) {
  std::set<std::string> seen;
  for (const auto& item : items)
    if (!seen.insert(normalizeName(item)).second)
      throw SpecFormatError(field, "duplicate entry after normalization: \"" + item + "\"");
}

} // namespace

TaskSpecification parseSpecJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecFormatError("<root>", e.what());
  }
  if (!j.is_object()) throw SpecFormatError("<root>", "spec must be a JSON object");

  static const std::set<std::string> known = {
      "taskDescription", "taskCriticalObjects", "actions", "distractors", "solutionSketch"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw SpecFormatError(key, "unknown field");

  TaskSpecification spec;
  if (!j.contains("taskDescription") || !j.at("taskDescription").is_string())
    throw SpecFormatError("taskDescription", "missing or not a string");
  spec.taskDescription = j.at("taskDescription").get<std::string>();
  spec.taskCriticalObjects = stringArray(j, "taskCriticalObjects");
  spec.actions = stringArray(j, "actions");
  spec.distractors = stringArray(j, "distractors");
  spec.solutionSketch = stringArray(j, "solutionSketch");

  if (spec.taskDescription.empty())
    throw SpecFormatError("taskDescription", "must be non-empty");
  if (spec.taskCriticalObjects.empty())
    throw SpecFormatError("taskCriticalObjects", "must be non-empty");
  if (spec.solutionSketch.empty())
    throw SpecFormatError("solutionSketch", "must be non-empty");
  requireUnique(spec.taskCriticalObjects, "taskCriticalObjects");
  requireUnique(spec.actions, "actions");
  requireUnique(spec.distractors, "distractors");
  return spec;
}

TaskSpecification loadSpec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecFormatError("<file>", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseSpecJson(buf.str());
}

std::string specToJson(const TaskSpecification& spec) {
  json j;
  j["taskDescription"] = spec.taskDescription;
  j["taskCriticalObjects"] = spec.taskCriticalObjects;
  j["actions"] = spec.actions;
  j["distractors"] = spec.distractors;
  j["solutionSketch"] = spec.solutionSketch;
  return j.dump(2) + "\n";
}

void saveSpec(const TaskSpecification& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecFormatError("<file>", "cannot write " + path.string());
  out << specToJson(spec);
}

} // namespace worldforge
