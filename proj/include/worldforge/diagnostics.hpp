#pragma once

#include <stdexcept>
#include <string>

namespace worldforge {

struct SourceSpan {
  int line = 1;   // 1-based
  int column = 1; // 1-based
};

struct ParseDiagnostic {
  int line = 1;
  int column = 1;
  std::string message;
  std::string snippet; // the offending source line, trimmed
};

// "line 3, col 7: message"
std::string formatDiagnostic(const ParseDiagnostic& d);

struct InstantiationFault : std::runtime_error {
  InstantiationFault(std::string objectName, std::string reason);
  std::string objectName;
  std::string reason;
};

// The fault class the validity harness detects: an internal effect error
// during step/tick, e.g. an effect touching a destroyed object.
struct RuntimeFault : std::runtime_error {
  RuntimeFault(std::string actionText, std::string reason);
  std::string actionText;
  std::string reason;
};

struct SpecFormatError : std::runtime_error {
  SpecFormatError(std::string field, const std::string& detail);
  std::string field;
};

struct CorpusError : std::runtime_error {
  explicit CorpusError(const std::string& what);
};

struct LLMClientError : std::runtime_error {
  enum class Kind { Timeout, Http, Auth, Malformed };
  LLMClientError(Kind k, const std::string& what);
  Kind kind;
};

std::string_view llmErrorKindName(LLMClientError::Kind k);

struct JudgeError : std::runtime_error {
  explicit JudgeError(const std::string& what);
};

} // namespace worldforge
