#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "modulo/errors.hpp"
#include "modulo/generator.hpp"

namespace modulo {

namespace {

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

struct LlmGenerator::Impl {
  LlmConfig config;
  std::string api_key;
  LlmTelemetry telemetry;
  mutable std::mutex mu;
};

LlmGenerator::LlmGenerator(LlmConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  if (const char* env = std::getenv(impl_->config.api_key_env.c_str()))
    impl_->api_key = env;
}

LlmGenerator::~LlmGenerator() = default;

std::string LlmGenerator::description() const { return "llm:" + impl_->config.model; }

LlmTelemetry LlmGenerator::telemetry() const {
  std::lock_guard lock(impl_->mu);
  return impl_->telemetry;
}

std::string LlmGenerator::generate(const std::string& prompt) {
  const LlmConfig& cfg = impl_->config;
  if (impl_->api_key.empty())
    throw GeneratorUnavailable("no API key available (set " + cfg.api_key_env + ")");

  nlohmann::json body;
  body["model"] = cfg.model;
  body["temperature"] = cfg.temperature;
  body["max_tokens"] = cfg.max_tokens;
  body["messages"] = nlohmann::json::array({
      nlohmann::json{{"role", "system"}, {"content", cfg.system_prompt}},
      nlohmann::json{{"role", "user"}, {"content", prompt}},
  });
  const std::string payload = body.dump();

  httplib::Client client(cfg.base_url);
  client.set_connection_timeout(cfg.timeout);
  client.set_read_timeout(cfg.timeout);
  client.set_bearer_token_auth(impl_->api_key);

  auto backoff = cfg.initial_backoff;
  std::string last_error = "request was never attempted";
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
      std::lock_guard lock(impl_->mu);
      ++impl_->telemetry.retries;
    }
    {
      std::lock_guard lock(impl_->mu);
      ++impl_->telemetry.requests;
    }

    auto res = client.Post(cfg.path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      std::lock_guard lock(impl_->mu);
      ++impl_->telemetry.failures;
      throw GeneratorUnavailable("authentication rejected (HTTP " +
                                 std::to_string(res->status) + ")");
    }
    if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      std::lock_guard lock(impl_->mu);
      ++impl_->telemetry.failures;
      throw GeneratorUnavailable("HTTP " + std::to_string(res->status) + ": " + res->body);
    }

    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
      last_error = "malformed completion payload";
      continue;
    }
    const auto& message = reply["choices"][0]["message"];
    if (!message.contains("content") || !message["content"].is_string()) {
      last_error = "completion payload has no message content";
      continue;
    }
    return message["content"].get<std::string>();
  }

  {
    std::lock_guard lock(impl_->mu);
    ++impl_->telemetry.failures;
  }
  throw GeneratorUnavailable("gave up after " + std::to_string(cfg.max_retries + 1) +
                             " attempts; last error: " + last_error);
}

}  // namespace modulo
