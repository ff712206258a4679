#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "worldforge/harness.hpp"
#include "worldforge/task_spec.hpp"

namespace worldforge {

inline constexpr const char* kApiKeyEnvVar = "WORLDFORGE_API_KEY";
inline constexpr const char* kBaseUrlEnvVar = "WORLDFORGE_BASE_URL";

struct ClientConfig {
  std::string baseUrl = "http://localhost:8080";
  std::string modelName = "gpt-4o";
  double temperature = 0.0;
  double topP = 1.0;
  double frequencyPenalty = 0.0;
  double presencePenalty = 0.0;
  std::string apiKeyEnvVar = kApiKeyEnvVar;
  double perGameTimeoutSeconds = 1800.0; // 30 minutes
  int maxRounds = 3;
  std::uint64_t validitySeed = 42;
};

// JSON file mirroring ClientConfig; WORLDFORGE_BASE_URL overrides baseUrl.
// Throws SpecFormatError on invariant violations (temperature >= 0,
// maxRounds >= 0, timeout > 0).
ClientConfig loadClientConfig(const std::filesystem::path& path);

struct PromptBundle {
  std::string engineDoc; // shared-layer interface documentation + DSL grammar
  std::string exampleGameSource;
  TaskSpecification targetSpec;
  std::string instruction;
};

struct AssembledPrompt {
  std::string text;
  int tokenEstimate = 0; // corpus-stats tokenizer over text
};

// Deterministic concatenation with fixed section headers, in the fixed order
// engine doc -> example -> spec -> instruction.
AssembledPrompt assemblePrompt(const PromptBundle& bundle);
AssembledPrompt assembleReflectionPrompt(const PromptBundle& bundle,
                                         const std::string& previousSource,
                                         const std::string& firstError);

// First fenced code block if present, else the whole response trimmed.
std::string extractSource(const std::string& responseText);

class ModelClient {
public:
  virtual ~ModelClient() = default;
  // Throws LLMClientError.
  virtual std::string generate(const ClientConfig& config, const std::string& prompt) = 0;
};

// Chat-completions HTTP client. POSTs /v1/chat/completions with the config
// parameters, bearer auth from the configured env var, and the per-game
// timeout as the request deadline.
class HttpModelClient final : public ModelClient {
public:
  std::string generate(const ClientConfig& config, const std::string& prompt) override;
};

// Test double: replays canned responses in order (last one repeats).
class ScriptedModelClient final : public ModelClient {
public:
  explicit ScriptedModelClient(std::vector<std::string> responses)
      : responses_(std::move(responses)) {}
  std::string generate(const ClientConfig&, const std::string&) override;
  int callCount() const { return calls_; }
private:
  std::vector<std::string> responses_;
  int calls_ = 0;
};

struct GenerationRecord {
  int round = 0;
  std::string promptText;
  std::string responseText;
  std::string extractedSource;
  ValidityReport validity;
  std::optional<std::string> firstError;
};

std::string recordsToJson(const std::vector<GenerationRecord>& records);

// Deterministic single-error selection: parse/validate diagnostics by source
// position first, then instantiation faults, then runtime faults in
// exploration order.
std::optional<std::string> firstErrorOf(const ValidityReport& validity);

// generate -> validate -> reflect. Each reflection prompt embeds the previous
// full source and exactly one error, and asks for a complete regeneration.
// Stops when runnableOk or after maxRounds reflections. When persistDir is
// given, every round's prompt/response/source and a records.json are written
// there. An LLMClientError aborts the loop, preserving completed records.
std::vector<GenerationRecord> reflectLoop(
    const ClientConfig& config, const PromptBundle& bundle, ModelClient& client,
    const std::optional<std::filesystem::path>& persistDir = std::nullopt);

// Alignment judge backed by the chat-completions client. Declares a serial
// contract: corpus evaluation drops to one worker when it is selected.
class LlmJudge final : public Judge {
public:
  LlmJudge(ClientConfig config, ModelClient& client)
      : config_(std::move(config)), client_(client) {}
  Judgment judge(const Transition& t) override; // throws JudgeError on bad output
  std::string name() const override { return "llm:" + config_.modelName; }
  bool concurrentSafe() const override { return false; }
private:
  ClientConfig config_;
  ModelClient& client_;
};

// The shipped game-language reference (docs/game-language.md), embedded at
// build time; the default PromptBundle::engineDoc.
const std::string& engineDocText();

} // namespace worldforge
