#include "demokit/budget.hpp"

#include <numeric>

#include "demokit/text.hpp"

namespace demokit {

void TokenizerSpec::validate() const {
    if (kind == TokenizerKind::remote && !endpoint) {
        throw ConfigError("tokenizer: remote kind requires an endpoint");
    }
    if (kind == TokenizerKind::builtin_deterministic && endpoint) {
        throw ConfigError("tokenizer: builtin kind takes no endpoint");
    }
}

void BudgetConfig::validate() const {
    if (demo_budget < 1) throw ConfigError("budget: demo_budget must be positive");
    if (output_budget < 1) throw ConfigError("budget: output_budget must be positive");
    if (demo_target < 1) throw ConfigError("budget: demo_target must be positive");
    if (demo_budget < demo_target) {
        throw ConfigError("budget: demo_budget must cover at least one token per demo");
    }
    if (demo_cap < demo_target) throw ConfigError("budget: demo_cap must be >= demo_target");
}

Tokenizer Tokenizer::builtin() {
    return Tokenizer{};
}

Tokenizer Tokenizer::remote(EndpointConfig endpoint, std::shared_ptr<Transport> transport) {
    Tokenizer tokenizer;
    tokenizer.kind_ = TokenizerKind::remote;
    tokenizer.client_ = std::make_shared<LlmClient>(std::move(endpoint), std::move(transport));
    return tokenizer;
}

Tokenizer Tokenizer::from_spec(const TokenizerSpec& spec, std::shared_ptr<Transport> transport) {
    spec.validate();
    if (spec.kind == TokenizerKind::builtin_deterministic) return builtin();
    return remote(*spec.endpoint, std::move(transport));
}

int Tokenizer::count(std::string_view textual) const {
    if (kind_ == TokenizerKind::builtin_deterministic) {
        return text::builtin_count(textual);
    }
    return static_cast<int>(client_->tokenize(std::string{textual}).size());
}

TruncateResult Tokenizer::truncate(std::string_view textual, int limit) const {
    if (limit < 1) throw Error("truncate: limit must be >= 1");
    if (kind_ == TokenizerKind::builtin_deterministic) {
        auto spans = text::builtin_token_spans(textual);
        if (static_cast<int>(spans.size()) <= limit) {
            return TruncateResult{std::string{textual}, false};
        }
        const auto cut = spans[static_cast<std::size_t>(limit) - 1].end;
        return TruncateResult{std::string{textual.substr(0, cut)}, true};
    }
    auto pieces = client_->tokenize(std::string{textual});
    if (static_cast<int>(pieces.size()) <= limit) {
        return TruncateResult{std::string{textual}, false};
    }
    std::string kept;
    for (int i = 0; i < limit; ++i) kept += pieces[static_cast<std::size_t>(i)];
    return TruncateResult{std::move(kept), true};
}

Demonstration demonstration_from_rendered(std::string_view block, const Tokenizer& tokenizer) {
    Demonstration demo;
    demo.rendered = std::string{text::trim(block)};
    const auto marker_pos = demo.rendered.rfind(kAnswerMarker);
    if (marker_pos != std::string::npos) {
        auto rest = std::string_view{demo.rendered}.substr(marker_pos + 4);
        const auto line_end = rest.find('\n');
        if (line_end != std::string_view::npos) rest = rest.substr(0, line_end);
        demo.answer = std::string{text::trim(rest)};
    }
    demo.token_count = tokenizer.count(demo.rendered);
    return demo;
}

ParsedDemos parse_demonstrations(std::string_view textual, const Tokenizer& tokenizer) {
    ParsedDemos parsed;
    const std::string_view delimiter{kEndDemoToken};
    std::size_t pos = 0;
    while (true) {
        const auto hit = textual.find(delimiter, pos);
        if (hit == std::string_view::npos) break;  // trailing fragment dropped
        const auto segment = text::trim(textual.substr(pos, hit - pos));
        if (!segment.empty()) {
            std::string block = std::string{segment} + "\n" + kEndDemoToken;
            parsed.demos.push_back(demonstration_from_rendered(block, tokenizer));
        }
        pos = hit + delimiter.size();
    }
    parsed.n = static_cast<int>(parsed.demos.size());
    return parsed;
}

}  // namespace demokit
