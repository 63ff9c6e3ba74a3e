#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demokit/llm_client.hpp"
#include "demokit/types.hpp"

namespace demokit {

struct RewardConfig {
    int target_demos = 2;  // D
    int demo_cap = 4;      // counts above this earn zero demo reward

    void validate() const;
};

// All components of the composite reward for one evaluated query.
struct RewardBreakdown {
    double l_llm = 0.0;   // mean negative log probability of the gold answer
    double r_p = 0.0;     // 1 / (1 + l_llm), in (0, 1]
    double r_acc = 0.0;   // 1 iff correct and fully generated
    double r_demo = 0.0;  // (n / D) while n <= cap, else 0
    int n_demos = 0;
    bool truncated = false;
    double total = 0.0;   // r_p + r_acc + r_demo

    nlohmann::json to_json() const;
    static RewardBreakdown from_json(const nlohmann::json& j);
};

struct LogProbReward {
    double l_llm = 0.0;
    double r_p = 0.0;
};

LogProbReward log_prob_reward(const TokenLogProbs& logprobs);
double accuracy_reward(bool correct, bool truncated);
double demo_count_reward(int n, const RewardConfig& config);
RewardBreakdown total_reward(const TokenLogProbs& logprobs, bool correct, bool truncated,
                             int n_demos, const RewardConfig& config);

// Group-relative normalization: (r - mean) / population std; all zero when
// the group has (near-)zero variance. Requires group size >= 2.
std::vector<double> group_advantages(const std::vector<double>& rewards);

struct BanditCandidate {
    std::string name;
    RewardBreakdown reward;
};

struct BanditResult {
    std::vector<double> probabilities;  // sums to 1 within 1e-9
    std::vector<double> preferences;
    int best = 0;  // argmax of probabilities
};

// Desk-scale policy-optimization run over a fixed candidate set: a softmax
// policy over preferences, updated each step from the group-relative
// advantages of `group_size` sampled candidates. Bit-reproducible for a
// fixed seed.
BanditResult bandit_sim(const std::vector<BanditCandidate>& candidates, int steps,
                        double learning_rate, int group_size, std::uint64_t seed);

}  // namespace demokit
