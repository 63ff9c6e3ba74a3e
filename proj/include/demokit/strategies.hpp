#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "demokit/budget.hpp"
#include "demokit/embed_index.hpp"
#include "demokit/llm_client.hpp"
#include "demokit/types.hpp"

namespace demokit {

enum class StrategyKind { zero_shot, rag, sft_only, base, grad, gradi };

std::string to_string(StrategyKind kind);
StrategyKind strategy_from_string(const std::string& s);

// base / sft_only / grad / gradi generate their own demonstrations; they
// differ only by which trained checkpoint the endpoint serves.
bool strategy_generates_demos(StrategyKind kind);

struct Strategy {
    StrategyKind kind = StrategyKind::zero_shot;
    std::optional<EndpointConfig> demo_endpoint;
};

struct PromptTemplates {
    std::string demo_math;
    std::string demo_mcq;
    std::string answer_math;
    std::string answer_mcq;

    static PromptTemplates defaults();
    // Demo templates must state the demo budget, two examples, the answer
    // marker and the end-of-demo token; answer templates the output budget
    // and the marker.
    void validate() const;
};

struct ContextBundle {
    std::string system_prompt;
    std::vector<Demonstration> demos;
    QueryRecord query;
    int demo_tokens_used = 0;
};

// The question block as the target model sees it (choices appended for mcq).
std::string render_query_block(const QueryRecord& query);

// Assembles the demos for one query under the configured strategy:
//   zero_shot: none. rag: the exact top-2 from the index, each truncated to
//   demo_budget / 2 tokens. generative kinds: one demo-endpoint call capped
//   at demo_budget, locally truncated, then split into complete blocks.
ContextBundle build_context(const Strategy& strategy, const QueryRecord& query,
                            const VectorIndex* index, const EmbeddingProvider* embedder,
                            const LlmClient* demo_client, const BudgetConfig& budget,
                            const PromptTemplates& templates, const Tokenizer& tokenizer);

// system = answer template for the query kind; user = demo blocks in order,
// then the question block, joined by blank lines. Pure: identical bundles
// produce identical bytes.
std::pair<std::string, std::string> render_prompt(const ContextBundle& bundle,
                                                  const PromptTemplates& templates);

}  // namespace demokit
