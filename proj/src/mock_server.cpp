#include "demokit/mock_server.hpp"

#include <cmath>

#include "demokit/text.hpp"

namespace demokit {

namespace {

using nlohmann::json;

// splitmix64; used to derive deterministic pseudo-embeddings from text.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json error_body(const std::string& message) {
    return json{{"error", {{"message", message}}}};
}

}  // namespace

MockScript MockScript::from_json(const nlohmann::json& j) {
    MockScript script;
    for (const auto& rule : j.value("replies", json::array())) {
        script.replies.push_back(
            {rule.at("match").get<std::string>(), rule.at("reply").get<std::string>()});
    }
    if (j.contains("default_reply") && !j["default_reply"].is_null()) {
        script.default_reply = j["default_reply"].get<std::string>();
    }
    script.echo_logprob = j.value("echo_logprob", -0.5);
    if (j.contains("token_logprobs")) {
        for (const auto& [token, value] : j["token_logprobs"].items()) {
            script.token_logprobs[token] = value.get<double>();
        }
    }
    script.embedding_dim = j.value("embedding_dim", static_cast<std::size_t>(8));
    script.fail_first_n = j.value("fail_first_n", 0);
    script.mixed_embedding_dims = j.value("mixed_embedding_dims", false);
    return script;
}

MockServer::MockServer(MockScript script) : script_(std::move(script)) {}

HttpResponse MockServer::post_json(const std::string& path, const nlohmann::json& body) {
    const int n = request_count_.fetch_add(1);
    if (n < script_.fail_first_n) {
        return HttpResponse{500, error_body("scripted transient failure").dump()};
    }
    try {
        if (path == "/v1/chat/completions") {
            return HttpResponse{200, handle_chat(body).dump()};
        }
        if (path == "/v1/completions") {
            return HttpResponse{200, handle_completions(body).dump()};
        }
        if (path == "/v1/embeddings") {
            return HttpResponse{200, handle_embeddings(body).dump()};
        }
        if (path == "/tokenize") {
            return HttpResponse{200, handle_tokenize(body).dump()};
        }
    } catch (const json::exception& e) {
        return HttpResponse{400, error_body(std::string{"bad request: "} + e.what()).dump()};
    } catch (const Error& e) {
        return HttpResponse{404, error_body(e.what()).dump()};
    }
    return HttpResponse{404, error_body("unknown path " + path).dump()};
}

const std::string* MockServer::lookup_reply(const std::string& content) const {
    for (const auto& rule : script_.replies) {
        if (content.find(rule.match) != std::string::npos) return &rule.reply;
    }
    if (script_.default_reply) return &*script_.default_reply;
    return nullptr;
}

nlohmann::json MockServer::handle_chat(const nlohmann::json& request) const {
    std::string content;
    for (const auto& message : request.at("messages")) {
        if (!content.empty()) content += "\n";
        content += message.at("content").get<std::string>();
    }
    const std::string* reply = lookup_reply(content);
    if (!reply) throw Error("no scripted reply matches request");

    const int max_tokens = request.value("max_tokens", 0);
    auto spans = text::builtin_token_spans(*reply);
    std::string reply_text = *reply;
    std::string finish_reason = "stop";
    int completion_tokens = static_cast<int>(spans.size());
    if (max_tokens > 0 && completion_tokens > max_tokens) {
        reply_text = reply->substr(0, spans[static_cast<std::size_t>(max_tokens) - 1].end);
        finish_reason = "length";
        completion_tokens = max_tokens;  // server accounting: capped at the request
    }
    const int prompt_tokens = text::builtin_count(content);
    return json{
        {"object", "chat.completion"},
        {"model", request.value("model", "mock")},
        {"choices",
         json::array({json{{"index", 0},
                           {"message", {{"role", "assistant"}, {"content", reply_text}}},
                           {"finish_reason", finish_reason}}})},
        {"usage",
         {{"prompt_tokens", prompt_tokens},
          {"completion_tokens", completion_tokens},
          {"total_tokens", prompt_tokens + completion_tokens}}},
    };
}

nlohmann::json MockServer::handle_completions(const nlohmann::json& request) const {
    const std::string prompt = request.at("prompt").get<std::string>();
    if (!request.value("echo", false) || !request.value("logprobs", false)) {
        throw Error("mock completions endpoint only supports echo+logprobs requests");
    }
    auto spans = text::builtin_token_spans(prompt);
    std::vector<std::string> tokens;
    std::vector<std::size_t> offsets;
    std::vector<double> values;
    tokens.reserve(spans.size());
    for (const auto& span : spans) {
        std::string token = prompt.substr(span.begin, span.end - span.begin);
        auto it = script_.token_logprobs.find(token);
        values.push_back(it != script_.token_logprobs.end() ? it->second
                                                            : script_.echo_logprob);
        offsets.push_back(span.begin);
        tokens.push_back(std::move(token));
    }
    return json{
        {"object", "text_completion"},
        {"model", request.value("model", "mock")},
        {"choices",
         json::array({json{{"index", 0},
                           {"text", prompt},
                           {"finish_reason", "stop"},
                           {"logprobs",
                            {{"tokens", tokens},
                             {"token_logprobs", values},
                             {"text_offset", offsets}}}}})},
    };
}

nlohmann::json MockServer::handle_embeddings(const nlohmann::json& request) {
    json data = json::array();
    std::size_t index = 0;
    for (const auto& item : request.at("input")) {
        const std::string textual = item.get<std::string>();
        std::size_t dim = script_.embedding_dim;
        if (script_.mixed_embedding_dims && index % 2 == 1) dim += 1;
        std::vector<double> values(dim);
        std::uint64_t state = fnv1a(textual);
        for (auto& v : values) {
            state = mix64(state);
            // map to [-1, 1)
            v = static_cast<double>(state >> 11) * (2.0 / 9007199254740992.0) - 1.0;
        }
        data.push_back(json{{"index", index}, {"embedding", values}});
        ++index;
    }
    return json{{"object", "list"}, {"data", data}};
}

nlohmann::json MockServer::handle_tokenize(const nlohmann::json& request) const {
    const std::string textual = request.at("content").get<std::string>();
    auto spans = text::builtin_token_spans(textual);
    // Pieces cover the text gaplessly so that concatenation reproduces it.
    std::vector<std::string> pieces;
    pieces.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const std::size_t begin = i == 0 ? 0 : spans[i].begin;
        const std::size_t end = i + 1 < spans.size() ? spans[i + 1].begin : textual.size();
        pieces.push_back(textual.substr(begin, end - begin));
    }
    return json{{"tokens", pieces}};
}

}  // namespace demokit
