#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "demokit/llm_client.hpp"

namespace demokit {

struct MockRule {
    std::string match;  // substring matched against the request's text content
    std::string reply;
};

struct MockScript {
    std::vector<MockRule> replies;              // matchers must be disjoint
    std::optional<std::string> default_reply;   // unmatched request -> default or error
    double echo_logprob = -0.5;                 // uniform per-token logprob in echo mode
    std::unordered_map<std::string, double> token_logprobs;  // per-token overrides
    std::size_t embedding_dim = 8;

    // Fault injection for transport tests.
    int fail_first_n = 0;            // respond 500 to the first n requests
    bool mixed_embedding_dims = false;

    static MockScript from_json(const nlohmann::json& j);
};

// In-process scripted endpoint speaking the same JSON protocol as a real
// server: /v1/chat/completions, /v1/completions (echo+logprobs),
// /v1/embeddings and /tokenize. Replies are a pure function of the request
// and the script, so identical requests get byte-identical responses.
// Token accounting uses the builtin tokenizer.
class MockServer : public Transport {
public:
    explicit MockServer(MockScript script);

    HttpResponse post_json(const std::string& path, const nlohmann::json& body) override;

    const MockScript& script() const { return script_; }

private:
    nlohmann::json handle_chat(const nlohmann::json& request) const;
    nlohmann::json handle_completions(const nlohmann::json& request) const;
    nlohmann::json handle_embeddings(const nlohmann::json& request);
    nlohmann::json handle_tokenize(const nlohmann::json& request) const;
    const std::string* lookup_reply(const std::string& content) const;

    MockScript script_;
    std::atomic<int> request_count_{0};
};

}  // namespace demokit
