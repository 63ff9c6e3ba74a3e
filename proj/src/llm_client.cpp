#include "demokit/llm_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace demokit {

namespace {

using nlohmann::json;

bool retryable_status(int status) {
    return status == 408 || status == 429 || status >= 500;
}

std::mutex g_transcript_mutex;

void append_transcript(const std::string& path, const std::string& base_url,
                       const std::string& request_path, const json& request,
                       const json& response) {
    std::lock_guard<std::mutex> lock(g_transcript_mutex);
    std::ofstream out(path, std::ios::app);
    json line{{"endpoint", base_url},
              {"path", request_path},
              {"request", request},
              {"response", response}};
    out << line.dump() << "\n";
}

}  // namespace

std::string to_string(FinishReason reason) {
    return reason == FinishReason::stop ? "stop" : "length";
}

void EndpointConfig::validate() const {
    if (base_url.empty()) throw ConfigError("endpoint: base_url is required");
    if (timeout.count() <= 0) throw ConfigError("endpoint: timeout must be positive");
    if (max_retries < 0 || max_retries > 5) {
        throw ConfigError("endpoint: max_retries must be in [0, 5]");
    }
    if (temperature < 0.0) throw ConfigError("endpoint: temperature must be >= 0");
}

nlohmann::json EndpointConfig::to_json() const {
    json j{{"base_url", base_url},
           {"model", model},
           {"timeout_ms", timeout.count()},
           {"max_retries", max_retries},
           {"temperature", temperature}};
    if (seed) j["seed"] = *seed;
    if (api_key_env != "DEMOKIT_API_KEY") j["api_key_env"] = api_key_env;
    if (backoff_base_ms != 100) j["backoff_base_ms"] = backoff_base_ms;
    if (!transcript_path.empty()) j["transcript"] = transcript_path;
    return j;
}

EndpointConfig EndpointConfig::from_json(const nlohmann::json& j) {
    EndpointConfig config;
    config.base_url = j.at("base_url").get<std::string>();
    config.model = j.value("model", std::string{});
    config.timeout = std::chrono::milliseconds(j.value("timeout_ms", 30000));
    config.max_retries = j.value("max_retries", 2);
    config.temperature = j.value("temperature", 0.0);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        config.seed = j.at("seed").get<std::uint64_t>();
    }
    config.api_key_env = j.value("api_key_env", std::string{"DEMOKIT_API_KEY"});
    config.backoff_base_ms = j.value("backoff_base_ms", 100);
    config.transcript_path = j.value("transcript", std::string{});
    config.validate();
    return config;
}

HttpTransport::HttpTransport(std::string base_url, std::chrono::milliseconds timeout,
                             std::string bearer_token)
    : base_url_(std::move(base_url)),
      timeout_(timeout),
      bearer_token_(std::move(bearer_token)) {}

HttpResponse HttpTransport::post_json(const std::string& path, const nlohmann::json& body) {
    httplib::Client client(base_url_);
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    httplib::Headers headers;
    if (!bearer_token_.empty()) {
        headers.emplace("Authorization", "Bearer " + bearer_token_);
    }
    auto result = client.Post(path, headers, body.dump(), "application/json");
    if (!result) {
        throw TransportError("POST " + base_url_ + path + " failed: " +
                             httplib::to_string(result.error()));
    }
    return HttpResponse{result->status, result->body};
}

LlmClient::LlmClient(EndpointConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
    config_.validate();
    if (!transport_) {
        std::string token;
        if (!config_.api_key_env.empty()) {
            if (const char* value = std::getenv(config_.api_key_env.c_str())) token = value;
        }
        transport_ = std::make_shared<HttpTransport>(config_.base_url, config_.timeout, token);
    }
}

nlohmann::json LlmClient::post_with_retry(const std::string& path,
                                          const nlohmann::json& request) const {
    const int attempts = config_.max_retries + 1;
    std::string last_error;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            auto delay = std::min<std::int64_t>(
                static_cast<std::int64_t>(config_.backoff_base_ms) << (attempt - 1), 2000);
            if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        HttpResponse response;
        try {
            response = transport_->post_json(path, request);
        } catch (const TransportError& e) {
            last_error = e.what();
            continue;
        }
        if (response.status == 200) {
            json parsed = json::parse(response.body, nullptr, false);
            if (parsed.is_discarded()) {
                throw Error("malformed JSON from " + config_.base_url + path);
            }
            if (!config_.transcript_path.empty()) {
                append_transcript(config_.transcript_path, config_.base_url, path, request,
                                  parsed);
            }
            return parsed;
        }
        if (retryable_status(response.status)) {
            last_error = "status " + std::to_string(response.status);
            continue;
        }
        // Well-formed non-transient errors are never retried.
        throw Error("server error " + std::to_string(response.status) + " from " +
                    config_.base_url + path + ": " + response.body);
    }
    throw TransportError("request to " + config_.base_url + path + " failed after " +
                         std::to_string(attempts) + " attempts (" + last_error + ")");
}

GenerationResult LlmClient::generate(const std::string& system, const std::string& user,
                                     int max_tokens) const {
    if (max_tokens < 1) throw Error("generate: max_tokens must be >= 1");
    json request{
        {"model", config_.model},
        {"messages",
         json::array({json{{"role", "system"}, {"content", system}},
                      json{{"role", "user"}, {"content", user}}})},
        {"max_tokens", max_tokens},
        {"temperature", config_.temperature},
    };
    if (config_.seed) request["seed"] = *config_.seed;
    json response = post_with_retry("/v1/chat/completions", request);

    GenerationResult result;
    try {
        const json& choice = response.at("choices").at(0);
        result.text = choice.at("message").at("content").get<std::string>();
        const std::string reason = choice.value("finish_reason", "stop");
        result.finish_reason = reason == "length" ? FinishReason::length : FinishReason::stop;
        if (response.contains("usage")) {
            result.prompt_tokens = response["usage"].value("prompt_tokens", 0);
            result.completion_tokens = response["usage"].value("completion_tokens", 0);
        }
    } catch (const json::exception& e) {
        throw Error("malformed chat response from " + config_.base_url + ": " + e.what());
    }
    return result;
}

TokenLogProbs LlmClient::score_answer(const std::string& context,
                                      const std::string& answer) const {
    if (answer.empty()) throw Error("score_answer: answer must be non-empty");
    json request{
        {"model", config_.model}, {"prompt", context + answer}, {"max_tokens", 0},
        {"echo", true},           {"logprobs", true},
    };
    json response = post_with_retry("/v1/completions", request);

    const std::size_t boundary = context.size();
    TokenLogProbs picked;
    try {
        const json& choice = response.at("choices").at(0);
        if (!choice.contains("logprobs") || choice["logprobs"].is_null()) {
            throw Error("endpoint " + config_.base_url + " (model " + config_.model +
                        ") does not support echo logprobs");
        }
        const json& lp = choice["logprobs"];
        const auto tokens = lp.at("tokens").get<std::vector<std::string>>();
        const auto offsets = lp.at("text_offset").get<std::vector<std::size_t>>();
        const json& values = lp.at("token_logprobs");
        if (tokens.size() != offsets.size() || tokens.size() != values.size()) {
            throw Error("echo logprobs arrays disagree in length");
        }
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            // A token belongs to the answer region iff its span ends past the
            // concatenation boundary.
            if (offsets[i] + tokens[i].size() <= boundary) continue;
            if (values[i].is_null()) {
                throw Error("null logprob inside answer span");
            }
            // Some servers emit tiny positive values; clamp to keep logprobs <= 0.
            picked.tokens.push_back(tokens[i]);
            picked.logprobs.push_back(std::min(0.0, values[i].get<double>()));
        }
    } catch (const json::exception& e) {
        throw Error("malformed completions response from " + config_.base_url + ": " +
                    e.what());
    }
    if (picked.logprobs.empty()) {
        throw Error("answer region maps to zero tokens (context length " +
                    std::to_string(boundary) + ")");
    }
    return picked;
}

std::vector<std::vector<double>> LlmClient::embed(const std::vector<std::string>& texts) const {
    if (texts.empty()) return {};
    json request{{"model", config_.model}, {"input", texts}};
    json response = post_with_retry("/v1/embeddings", request);

    std::vector<std::vector<double>> vectors(texts.size());
    try {
        for (const json& item : response.at("data")) {
            const auto index = item.at("index").get<std::size_t>();
            if (index >= vectors.size()) throw Error("embedding index out of range");
            vectors[index] = item.at("embedding").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw Error("malformed embeddings response from " + config_.base_url + ": " +
                    e.what());
    }
    for (const auto& v : vectors) {
        if (v.empty()) throw Error("embeddings response missing an input position");
        if (v.size() != vectors.front().size()) {
            throw Error("embeddings response has inconsistent dimensions");
        }
    }
    return vectors;
}

std::vector<std::string> LlmClient::tokenize(const std::string& textual) const {
    json request{{"model", config_.model}, {"content", textual}};
    json response = post_with_retry("/tokenize", request);
    try {
        return response.at("tokens").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error("malformed tokenize response from " + config_.base_url + ": " + e.what());
    }
}

}  // namespace demokit
