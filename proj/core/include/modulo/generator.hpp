#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "modulo/query.hpp"

namespace modulo {

class Sandbox;

// A plan generator maps a prompt to candidate plan text. The engine drives it
// through the generate-test loop; implementations carry their own transport
// (HTTP, canned scripts, deterministic search) behind this interface.
class PlanGenerator {
 public:
  virtual ~PlanGenerator() = default;

  // Returns the raw text reply for the prompt. Throws GeneratorUnavailable
  // when no reply can be produced (network failure, exhausted script, ...).
  virtual std::string generate(const std::string& prompt) = 0;

  // Stable identifier recorded in session logs ("llm", "scripted", ...).
  virtual std::string description() const = 0;
};

// --- LLM-backed generator ---------------------------------------------------

struct LlmConfig {
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4-turbo";
  std::string api_key_env = "MODULO_API_KEY";  // the key itself never lives in config
  std::string system_prompt = "You are a travel planning assistant.";
  double temperature = 0.0;         // favor reproducible runs
  int max_tokens = 4096;
  int max_retries = 3;              // retryable failures: 429 and 5xx
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{120};
};

struct LlmTelemetry {
  std::uint64_t requests = 0;
  std::uint64_t retries = 0;
  std::uint64_t failures = 0;
};

class LlmGenerator : public PlanGenerator {
 public:
  explicit LlmGenerator(LlmConfig config);
  ~LlmGenerator() override;

  std::string generate(const std::string& prompt) override;
  std::string description() const override;

  LlmTelemetry telemetry() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// --- Scripted generator (tests, offline replay) ------------------------------

// Replays a fixed sequence of responses. Once the script is exhausted the last
// response repeats, so a converged plan stays converged under extra calls.
class ScriptedGenerator : public PlanGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> responses);

  // Loads a script file: responses separated by lines equal to "---".
  static ScriptedGenerator from_file(const std::filesystem::path& path);

  std::string generate(const std::string& prompt) override;
  std::string description() const override { return "scripted"; }

  // Prompts seen so far, in call order. For asserting on prompt content.
  std::vector<std::string> prompts_seen() const;
  std::size_t calls() const;

 private:
  std::vector<std::string> responses_;
  std::vector<std::string> prompts_;
  std::size_t cursor_ = 0;
  mutable std::mutex mu_;
};

// --- Greedy baseline generator -----------------------------------------------

// Deterministic sandbox-backed baseline: picks the cheapest feasible option
// for every slot and emits a schema-valid plan. Ignores the prompt text; the
// query and sandbox drive all choices. Slots with no feasible option degrade
// to the empty marker rather than failing.
class GreedyGenerator : public PlanGenerator {
 public:
  GreedyGenerator(const Sandbox& sandbox, Query query);

  std::string generate(const std::string& prompt) override;
  std::string description() const override { return "greedy"; }

 private:
  const Sandbox& sandbox_;
  Query query_;
};

}  // namespace modulo
