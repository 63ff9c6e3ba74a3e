#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demokit/types.hpp"

namespace demokit {

struct EndpointConfig {
    std::string base_url;  // "http://host:port" or "mock://<name>"
    std::string model;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 2;  // at most 5
    double temperature = 0.0;
    std::optional<std::uint64_t> seed;
    std::string api_key_env = "DEMOKIT_API_KEY";
    int backoff_base_ms = 100;          // doubled per attempt, capped at 2s
    std::string transcript_path;        // when set, requests/responses appended as JSONL

    void validate() const;

    nlohmann::json to_json() const;
    static EndpointConfig from_json(const nlohmann::json& j);
};

enum class FinishReason { stop, length };

std::string to_string(FinishReason reason);

struct GenerationResult {
    std::string text;
    FinishReason finish_reason = FinishReason::stop;
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

// Per-token natural-log probabilities of an answer span, [P1 .. Pn].
struct TokenLogProbs {
    std::vector<std::string> tokens;
    std::vector<double> logprobs;  // all <= 0

    std::size_t size() const { return logprobs.size(); }
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Request/response channel behind the client. The HTTP implementation talks
// to a real server; MockServer implements the same interface in-process.
class Transport {
public:
    virtual ~Transport() = default;
    // Throws TransportError on connection-level failure.
    virtual HttpResponse post_json(const std::string& path, const nlohmann::json& body) = 0;
};

class HttpTransport : public Transport {
public:
    HttpTransport(std::string base_url, std::chrono::milliseconds timeout,
                  std::string bearer_token = "");
    HttpResponse post_json(const std::string& path, const nlohmann::json& body) override;

private:
    std::string base_url_;
    std::chrono::milliseconds timeout_;
    std::string bearer_token_;
};

// Client for chat generation, echo-logprobs scoring, embeddings and remote
// tokenization. Shareable across threads; each call is independent.
class LlmClient {
public:
    // With no explicit transport an HttpTransport is built from the config.
    explicit LlmClient(EndpointConfig config, std::shared_ptr<Transport> transport = nullptr);

    GenerationResult generate(const std::string& system, const std::string& user,
                              int max_tokens) const;

    // Scores `answer` appended to `context` in echo-with-logprobs mode and
    // returns logprobs for the tokens inside the answer region. A token
    // straddling the boundary is attributed to the answer.
    TokenLogProbs score_answer(const std::string& context, const std::string& answer) const;

    // One vector per input text, order preserved; uniform dimension enforced.
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) const;

    // Remote tokenizer pieces; concatenating them reproduces the input text.
    std::vector<std::string> tokenize(const std::string& textual) const;

    const EndpointConfig& config() const { return config_; }

private:
    nlohmann::json post_with_retry(const std::string& path, const nlohmann::json& request) const;

    EndpointConfig config_;
    std::shared_ptr<Transport> transport_;
};

}  // namespace demokit
