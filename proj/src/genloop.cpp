#include "worldforge/genloop.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "worldforge/engine_doc.hpp"
#include "worldforge/stats.hpp"

namespace worldforge {

using nlohmann::json;

const std::string& engineDocText() {
  static const std::string doc = detail::kEngineDocRaw;
  return doc;
}

ClientConfig loadClientConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecFormatError("<file>", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw SpecFormatError("<root>", e.what());
  }
  ClientConfig c;
  auto read = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  read("baseUrl", c.baseUrl);
  read("modelName", c.modelName);
  read("temperature", c.temperature);
  read("topP", c.topP);
  read("frequencyPenalty", c.frequencyPenalty);
  read("presencePenalty", c.presencePenalty);
  read("apiKeyEnvVar", c.apiKeyEnvVar);
  read("perGameTimeoutSeconds", c.perGameTimeoutSeconds);
  read("maxRounds", c.maxRounds);
  read("validitySeed", c.validitySeed);
  if (const char* base = std::getenv(kBaseUrlEnvVar); base && *base) c.baseUrl = base;
  if (c.temperature < 0) throw SpecFormatError("temperature", "must be >= 0");
  if (c.maxRounds < 0) throw SpecFormatError("maxRounds", "must be >= 0");
  if (!(c.perGameTimeoutSeconds > 0))
    throw SpecFormatError("perGameTimeoutSeconds", "must be > 0");
  return c;
}

// ---------------------------------------------------------------------------
// Prompt assembly
// ---------------------------------------------------------------------------

namespace {

std::string assembleSections(const PromptBundle& bundle, bool withInstruction) {
  std::string out;
  out += "## World engine and game language\n\n";
  out += bundle.engineDoc;
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += "\n## Example game\n\n```\n";
  out += bundle.exampleGameSource;
  if (!bundle.exampleGameSource.empty() && bundle.exampleGameSource.back() != '\n')
    out += '\n';
  out += "```\n";
  out += "\n## Target task specification\n\n";
  out += specToJson(bundle.targetSpec);
  if (withInstruction) {
    out += "\n## Instructions\n\n";
    out += bundle.instruction;
    if (!bundle.instruction.empty() && bundle.instruction.back() != '\n') out += '\n';
  }
  return out;
}

std::string trimCopy(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

AssembledPrompt assemblePrompt(const PromptBundle& bundle) {
  AssembledPrompt p;
  p.text = assembleSections(bundle, true);
  p.tokenEstimate = approxTokenCount(p.text);
  return p;
}

AssembledPrompt assembleReflectionPrompt(const PromptBundle& bundle,
                                         const std::string& previousSource,
                                         const std::string& firstError) {
  AssembledPrompt p;
  std::string out = assembleSections(bundle, false);
  out += "\n## Previous attempt\n\n```\n";
  out += previousSource;
  if (!previousSource.empty() && previousSource.back() != '\n') out += '\n';
  out += "```\n";
  out += "\n## Detected error\n\n";
  out += firstError;
  if (!firstError.empty() && firstError.back() != '\n') out += '\n';
  out += "\n## Instructions\n\n";
  out += "The previous attempt failed with exactly the error shown above. "
         "Regenerate the complete game program from scratch, fixing that error. "
         "Output the entire game as a single fenced code block.\n";
  p.text = std::move(out);
  p.tokenEstimate = approxTokenCount(p.text);
  return p;
}

std::string extractSource(const std::string& responseText) {
  size_t fence = responseText.find("```");
  if (fence == std::string::npos) return trimCopy(responseText);
  size_t lineEnd = responseText.find('\n', fence);
  if (lineEnd == std::string::npos) return trimCopy(responseText);
  size_t start = lineEnd + 1;
  size_t close = responseText.find("\n```", start);
  std::string block = close == std::string::npos
                          ? responseText.substr(start)
                          : responseText.substr(start, close - start);
  if (!block.empty() && block.back() != '\n') block += '\n';
  return block;
}

// ---------------------------------------------------------------------------
// HTTP client
// ---------------------------------------------------------------------------

std::string HttpModelClient::generate(const ClientConfig& config, const std::string& prompt) {
  const char* key = std::getenv(config.apiKeyEnvVar.c_str());
  if (!key || !*key)
    throw LLMClientError(LLMClientError::Kind::Auth,
                         "environment variable " + config.apiKeyEnvVar + " is not set");

  httplib::Client client(config.baseUrl);
  auto timeout = std::chrono::milliseconds(
      static_cast<long long>(std::ceil(config.perGameTimeoutSeconds * 1000.0)));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  client.set_bearer_token_auth(key);

  json body;
  body["model"] = config.modelName;
  body["temperature"] = config.temperature;
  body["top_p"] = config.topP;
  body["frequency_penalty"] = config.frequencyPenalty;
  body["presence_penalty"] = config.presencePenalty;
  body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});

  httplib::Result res =
      client.Post("/v1/chat/completions", body.dump(), "application/json");
  if (!res) {
    switch (res.error()) {
      case httplib::Error::ConnectionTimeout:
      case httplib::Error::Read:
      case httplib::Error::Write:
        throw LLMClientError(LLMClientError::Kind::Timeout,
                             "request exceeded " +
                                 std::to_string(config.perGameTimeoutSeconds) + "s");
      default:
        throw LLMClientError(LLMClientError::Kind::Http,
                             "transport error: " + httplib::to_string(res.error()));
    }
  }
  if (res->status == 401 || res->status == 403)
    throw LLMClientError(LLMClientError::Kind::Auth,
                         "server rejected credentials (HTTP " +
                             std::to_string(res->status) + ")");
  if (res->status != 200)
    throw LLMClientError(LLMClientError::Kind::Http,
                         "HTTP " + std::to_string(res->status));
  try {
    json j = json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw LLMClientError(LLMClientError::Kind::Malformed,
                         std::string("unexpected response shape: ") + e.what());
  }
}

std::string ScriptedModelClient::generate(const ClientConfig&, const std::string&) {
  if (responses_.empty())
    throw LLMClientError(LLMClientError::Kind::Http, "scripted client has no responses");
  size_t idx = std::min(static_cast<size_t>(calls_), responses_.size() - 1);
  ++calls_;
  return responses_[idx];
}

// ---------------------------------------------------------------------------
// Reflection loop
// ---------------------------------------------------------------------------

std::optional<std::string> firstErrorOf(const ValidityReport& validity) {
  if (validity.faults.empty()) return std::nullopt;
  const FaultRecord& f = validity.faults.front();
  if (!f.actionText.empty() && f.actionText.front() == '<') return f.reason;
  std::string seq;
  for (const auto& a : f.sequence) {
    if (!seq.empty()) seq += "; ";
    seq += a;
  }
  return "runtime fault after [" + seq + "]: " + f.reason;
}

namespace {

void persistRecord(const std::filesystem::path& dir, const GenerationRecord& r) {
  std::string stem = "round-" + std::to_string(r.round);
  std::ofstream(dir / (stem + ".prompt.txt"), std::ios::binary) << r.promptText;
  std::ofstream(dir / (stem + ".response.txt"), std::ios::binary) << r.responseText;
  std::ofstream(dir / (stem + ".source.wg"), std::ios::binary) << r.extractedSource;
  std::ofstream(dir / (stem + ".validity.json"), std::ios::binary)
      << validityToJson(r.validity);
}

} // namespace

std::string recordsToJson(const std::vector<GenerationRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    json j;
    j["round"] = r.round;
    j["promptText"] = r.promptText;
    j["responseText"] = r.responseText;
    j["extractedSource"] = r.extractedSource;
    j["validity"] = json::parse(validityToJson(r.validity));
    if (r.firstError) j["firstError"] = *r.firstError;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::vector<GenerationRecord> reflectLoop(
    const ClientConfig& config, const PromptBundle& bundle, ModelClient& client,
    const std::optional<std::filesystem::path>& persistDir) {
  if (persistDir) std::filesystem::create_directories(*persistDir);
  std::vector<GenerationRecord> records;
  auto persistAll = [&]() {
    if (!persistDir) return;
    std::ofstream(*persistDir / "records.json", std::ios::binary)
        << recordsToJson(records);
  };

  for (int round = 0; round <= config.maxRounds; ++round) {
    AssembledPrompt prompt =
        round == 0 ? assemblePrompt(bundle)
                   : assembleReflectionPrompt(bundle, records.back().extractedSource,
                                              *records.back().firstError);
    GenerationRecord rec;
    rec.round = round;
    rec.promptText = prompt.text;
    try {
      rec.responseText = client.generate(config, prompt.text);
    } catch (const LLMClientError&) {
      persistAll();
      throw; // completed records are preserved on disk
    }
    rec.extractedSource = extractSource(rec.responseText);
    rec.validity = checkValidity(rec.extractedSource, 3, 100, config.validitySeed);
    rec.firstError = firstErrorOf(rec.validity);
    if (persistDir) persistRecord(*persistDir, rec);
    bool done = rec.validity.runnableOk;
    records.push_back(std::move(rec));
    if (done) break;
  }
  persistAll();
  return records;
}

// ---------------------------------------------------------------------------
// LLM-backed alignment judge
// ---------------------------------------------------------------------------

Judgment LlmJudge::judge(const Transition& t) {
  std::string prompt =
      "You judge whether one step of a text game respects everyday physics.\n"
      "Before: " + t.before + "\n"
      "Action: " + t.action + "\n"
      "After: " + t.after + "\n"
      "Reply with a single JSON object exactly of the form "
      "{\"aligned\": true or false, \"justification\": \"...\"}.\n";
  std::string response;
  try {
    response = client_.generate(config_, prompt);
  } catch (const LLMClientError& e) {
    throw JudgeError(e.what());
  }
  size_t open = response.find('{');
  size_t close = response.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw JudgeError("judge response carries no JSON object");
  try {
    json j = json::parse(response.substr(open, close - open + 1));
    Judgment out;
    out.aligned = j.at("aligned").get<bool>();
    out.justification = j.value("justification", "");
    return out;
  } catch (const json::exception& e) {
    throw JudgeError(std::string("judge response is not valid JSON: ") + e.what());
  }
}

} // namespace worldforge
