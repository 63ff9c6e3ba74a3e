#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "demokit/llm_client.hpp"
#include "demokit/types.hpp"

namespace demokit {

enum class TokenizerKind { builtin_deterministic, remote };

struct TokenizerSpec {
    TokenizerKind kind = TokenizerKind::builtin_deterministic;
    std::optional<EndpointConfig> endpoint;  // required iff kind == remote

    void validate() const;
};

struct BudgetConfig {
    int demo_budget = 300;    // token cap for the whole demonstration block
    int output_budget = 256;  // token cap for the final answer generation
    int demo_target = 2;      // D: expected demonstration count
    int demo_cap = 4;         // counts above this earn zero demo reward

    void validate() const;
};

struct TruncateResult {
    std::string text;
    bool truncated = false;
};

// Token counting and boundary-respecting truncation. The builtin kind is
// fully deterministic and offline; the remote kind asks the endpoint's
// /tokenize route for pieces.
class Tokenizer {
public:
    static Tokenizer builtin();
    static Tokenizer remote(EndpointConfig endpoint,
                            std::shared_ptr<Transport> transport = nullptr);
    static Tokenizer from_spec(const TokenizerSpec& spec,
                               std::shared_ptr<Transport> transport = nullptr);

    int count(std::string_view textual) const;
    TruncateResult truncate(std::string_view textual, int limit) const;

    TokenizerKind kind() const { return kind_; }

private:
    Tokenizer() = default;

    TokenizerKind kind_ = TokenizerKind::builtin_deterministic;
    std::shared_ptr<LlmClient> client_;  // remote kind only
};

struct ParsedDemos {
    std::vector<Demonstration> demos;
    int n = 0;  // number of complete demonstrations
};

// Splits on the literal end-of-demo delimiter. Each non-blank segment before
// a delimiter becomes one demonstration; content after the last delimiter is
// an incomplete fragment and is dropped. Token counts use `tokenizer`.
ParsedDemos parse_demonstrations(std::string_view textual,
                                 const Tokenizer& tokenizer = Tokenizer::builtin());

// Rebuilds a Demonstration from a rendered block (used for retrieved demos
// and parsed segments): answer is the value on the last marker line, when
// present.
Demonstration demonstration_from_rendered(std::string_view block, const Tokenizer& tokenizer);

}  // namespace demokit
