#include "worldforge/diagnostics.hpp"

namespace worldforge {

std::string formatDiagnostic(const ParseDiagnostic& d) {
  std::string out = "line " + std::to_string(d.line) + ", col " +
                    std::to_string(d.column) + ": " + d.message;
  if (!d.snippet.empty()) out += "\n  | " + d.snippet;
  return out;
}

InstantiationFault::InstantiationFault(std::string objectName_, std::string reason_)
    : std::runtime_error("instantiation fault (" + objectName_ + "): " + reason_),
      objectName(std::move(objectName_)),
      reason(std::move(reason_)) {}

RuntimeFault::RuntimeFault(std::string actionText_, std::string reason_)
    : std::runtime_error("runtime fault [" + actionText_ + "]: " + reason_),
      actionText(std::move(actionText_)),
      reason(std::move(reason_)) {}

SpecFormatError::SpecFormatError(std::string field_, const std::string& detail)
    : std::runtime_error("spec format error (" + field_ + "): " + detail),
      field(std::move(field_)) {}

CorpusError::CorpusError(const std::string& what) : std::runtime_error(what) {}

LLMClientError::LLMClientError(Kind k, const std::string& what)
    : std::runtime_error(std::string(llmErrorKindName(k)) + ": " + what), kind(k) {}

std::string_view llmErrorKindName(LLMClientError::Kind k) {
  switch (k) {
    case LLMClientError::Kind::Timeout: return "timeout";
    case LLMClientError::Kind::Http: return "http";
    case LLMClientError::Kind::Auth: return "auth";
    case LLMClientError::Kind::Malformed: return "malformed";
  }
  return "?";
}

JudgeError::JudgeError(const std::string& what) : std::runtime_error(what) {}

} // namespace worldforge
