#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace worldforge {

// The structured task contract every generated game is evaluated against.
struct TaskSpecification {
  std::string taskDescription;
  std::vector<std::string> taskCriticalObjects;
  std::vector<std::string> actions;
  std::vector<std::string> distractors;
  std::vector<std::string> solutionSketch;

  friend bool operator==(const TaskSpecification&, const TaskSpecification&) = default;
};

// On-disk format: a single JSON object with exactly the five fields above,
// all arrays of strings. Unknown fields are rejected. Throws SpecFormatError
// with the offending field name.
TaskSpecification loadSpec(const std::filesystem::path& path);
TaskSpecification parseSpecJson(const std::string& text);
void saveSpec(const TaskSpecification& spec, const std::filesystem::path& path);
std::string specToJson(const TaskSpecification& spec);

// lowercase; non-alphanumerics collapse to single spaces; words longer than
// three characters lose their trailing run of 's'. Idempotent.
std::string normalizeName(std::string_view text);

} // namespace worldforge
