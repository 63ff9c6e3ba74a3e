#include "demokit/strategies.hpp"

#include <algorithm>
#include <array>

namespace demokit {

namespace {

constexpr const char* kDemoMathTemplate =
    "You are an educational chatbot specialized in mathematical reasoning. For each "
    "question provided by the user, do the following:\n"
    "1. You have a budget of 300 tokens to create **two different examples** that are "
    "inspired by the user's input.\n"
    "2. Make sure that the generated examples are short and differ significantly in "
    "**context and reasoning steps**.\n"
    "3. Do not repeat the same problem using different numbers or different words. **Each "
    "example must be genuinely unique**.\n"
    "4. For each example, describe the problem scenario and its context.\n"
    "5. Provide a step-by-step reasoning to solve the problem defined in the example.\n"
    "6. Finish each example with the numerical answer, labelled clearly as #### [your "
    "numerical result here without any units or symbols].\n"
    "7. Append the [END_DEMO] token at the end of each example.\n"
    "Ensure that the generated examples are short, unique, factually correct, clearly "
    "described and solvable. Focus on **maximum educational value**.";

constexpr const char* kDemoMcqTemplate =
    "You are an educational assistant specializing in multiple-choice science reasoning. "
    "For each user question, follow these steps:\n"
    "1. You have a budget of 300 tokens to create **two different multiple-choice "
    "examples** that are inspired by the user's input.\n"
    "2. These should test **different scientific ideas** or applications related to the "
    "concept.\n"
    "3. Each example must include:\n"
    "- A clearly marked and worded question\n"
    "- Four answer choices labeled A, B, C, and D\n"
    "- A brief explanation of the correct answer\n"
    "- The final answer written as: #### [correct letter]\n"
    "- The [END_DEMO] token after the final answer.\n"
    "4. Do not copy or rephrase the original question. Focus on generating fresh, diverse "
    "examples that are educational and well-structured.\n"
    "5. Remember: Generate **clearly marked** and **unique** questions, answer choices, "
    "explanation a final answer and the [END_DEMO] token.";

constexpr const char* kAnswerMathTemplate =
    "You are an educational chatbot specialized in math reasoning.\n"
    "Your task is to solve ONLY the final question provided.\n"
    "DO NOT generate new questions or examples.\n"
    "You are allowed to use only 256 tokens to answer the question.\n"
    "Provide a step-by-step solution and end with the final numerical answer labeled "
    "clearly as #### [your numerical result here without any units or symbols].";

constexpr const char* kAnswerMcqTemplate =
    "You are allowed to use only 256 tokens to answer the question.\n"
    "Remember:\n"
    "1. Review all choices (A-D)\n"
    "2. Provide a very short explanation using scientific logic\n"
    "3. Do NOT start with the answer\n"
    "4. After the explanation, write only the final answer on a new line like:\n"
    "#### [A single letter A-D]";

void require_mention(const std::string& templ, const std::string& needle,
                     const std::string& which) {
    if (templ.find(needle) == std::string::npos) {
        throw ConfigError("template " + which + " must mention \"" + needle + "\"");
    }
}

}  // namespace

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::zero_shot: return "zero_shot";
        case StrategyKind::rag: return "rag";
        case StrategyKind::sft_only: return "sft_only";
        case StrategyKind::base: return "base";
        case StrategyKind::grad: return "grad";
        case StrategyKind::gradi: return "gradi";
    }
    return "zero_shot";
}

StrategyKind strategy_from_string(const std::string& s) {
    if (s == "zero_shot") return StrategyKind::zero_shot;
    if (s == "rag") return StrategyKind::rag;
    if (s == "sft_only") return StrategyKind::sft_only;
    if (s == "base") return StrategyKind::base;
    if (s == "grad") return StrategyKind::grad;
    if (s == "gradi") return StrategyKind::gradi;
    throw ConfigError("unknown strategy \"" + s + "\"");
}

bool strategy_generates_demos(StrategyKind kind) {
    return kind == StrategyKind::sft_only || kind == StrategyKind::base ||
           kind == StrategyKind::grad || kind == StrategyKind::gradi;
}

PromptTemplates PromptTemplates::defaults() {
    return PromptTemplates{kDemoMathTemplate, kDemoMcqTemplate, kAnswerMathTemplate,
                           kAnswerMcqTemplate};
}

void PromptTemplates::validate() const {
    for (const auto& [templ, which] :
         std::array{std::pair{&demo_math, "demo_math"}, std::pair{&demo_mcq, "demo_mcq"}}) {
        require_mention(*templ, "300", which);
        require_mention(*templ, "two", which);
        require_mention(*templ, kAnswerMarker, which);
        require_mention(*templ, kEndDemoToken, which);
    }
    for (const auto& [templ, which] : std::array{std::pair{&answer_math, "answer_math"},
                                                 std::pair{&answer_mcq, "answer_mcq"}}) {
        require_mention(*templ, "256", which);
        require_mention(*templ, kAnswerMarker, which);
    }
}

std::string render_query_block(const QueryRecord& query) {
    std::string block = "Question: " + query.question;
    if (query.answer_kind == AnswerKind::mcq) {
        if (query.choices.empty()) {
            throw Error("mcq query \"" + query.id + "\" has no choices");
        }
        for (const auto& choice : query.choices) {
            block += "\n" + choice.letter + ". " + choice.text;
        }
    }
    return block;
}

ContextBundle build_context(const Strategy& strategy, const QueryRecord& query,
                            const VectorIndex* index, const EmbeddingProvider* embedder,
                            const LlmClient* demo_client, const BudgetConfig& budget,
                            const PromptTemplates& templates, const Tokenizer& tokenizer) {
    budget.validate();
    ContextBundle bundle;
    bundle.query = query;
    const bool mcq = query.answer_kind == AnswerKind::mcq;
    bundle.system_prompt = mcq ? templates.answer_mcq : templates.answer_math;

    if (strategy.kind == StrategyKind::zero_shot) {
        return bundle;
    }

    if (strategy.kind == StrategyKind::rag) {
        if (index == nullptr || embedder == nullptr) {
            throw Error("rag strategy requires a vector index and its embedding provider");
        }
        const auto query_vec = embedder->embed({query.question});
        const auto hits = index->top_k(query_vec.at(0), 2);
        // Per-demo cap of half the budget keeps two retrieved demos within
        // the demonstration budget.
        const int per_demo = std::max(1, budget.demo_budget / 2);
        for (const auto& hit : hits) {
            const IndexEntry* entry = index->find(hit.id);
            const auto cut = tokenizer.truncate(entry->rendered, per_demo);
            bundle.demos.push_back(demonstration_from_rendered(cut.text, tokenizer));
            bundle.demo_tokens_used += bundle.demos.back().token_count;
        }
        return bundle;
    }

    if (demo_client == nullptr) {
        throw Error("strategy " + to_string(strategy.kind) + " requires a demo endpoint");
    }
    const std::string demo_system = mcq ? templates.demo_mcq : templates.demo_math;
    const auto generated =
        demo_client->generate(demo_system, render_query_block(query), budget.demo_budget);
    const auto capped = tokenizer.truncate(generated.text, budget.demo_budget);
    auto parsed = parse_demonstrations(capped.text, tokenizer);
    bundle.demos = std::move(parsed.demos);
    for (const auto& demo : bundle.demos) bundle.demo_tokens_used += demo.token_count;
    return bundle;
}

std::pair<std::string, std::string> render_prompt(const ContextBundle& bundle,
                                                  const PromptTemplates& templates) {
    const bool mcq = bundle.query.answer_kind == AnswerKind::mcq;
    const std::string& system = mcq ? templates.answer_mcq : templates.answer_math;
    std::string user;
    for (const auto& demo : bundle.demos) {
        user += demo.rendered;
        user += "\n\n";
    }
    user += render_query_block(bundle.query);
    return {system, user};
}

}  // namespace demokit
