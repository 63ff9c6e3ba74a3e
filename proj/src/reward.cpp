#include "demokit/reward.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

namespace demokit {

void RewardConfig::validate() const {
    if (target_demos < 1) throw ConfigError("reward: target_demos must be positive");
    if (demo_cap < target_demos) {
        throw ConfigError("reward: demo_cap must be >= target_demos");
    }
}

nlohmann::json RewardBreakdown::to_json() const {
    return nlohmann::json{{"l_llm", l_llm},   {"r_p", r_p},
                          {"r_acc", r_acc},   {"r_demo", r_demo},
                          {"n_demos", n_demos}, {"truncated", truncated},
                          {"total", total}};
}

RewardBreakdown RewardBreakdown::from_json(const nlohmann::json& j) {
    RewardBreakdown b;
    b.l_llm = j.value("l_llm", 0.0);
    b.r_p = j.value("r_p", 0.0);
    b.r_acc = j.value("r_acc", 0.0);
    b.r_demo = j.value("r_demo", 0.0);
    b.n_demos = j.value("n_demos", 0);
    b.truncated = j.value("truncated", false);
    b.total = j.contains("total") ? j["total"].get<double>() : b.r_p + b.r_acc + b.r_demo;
    return b;
}

LogProbReward log_prob_reward(const TokenLogProbs& logprobs) {
    if (logprobs.logprobs.empty()) throw Error("log_prob_reward: empty logprobs");
    double sum = 0.0;
    for (double lp : logprobs.logprobs) {
        if (lp > 0.0) throw Error("log_prob_reward: logprobs must be <= 0");
        sum += lp;
    }
    LogProbReward result;
    result.l_llm = -sum / static_cast<double>(logprobs.logprobs.size());
    result.r_p = 1.0 / (1.0 + result.l_llm);
    return result;
}

double accuracy_reward(bool correct, bool truncated) {
    return correct && !truncated ? 1.0 : 0.0;
}

double demo_count_reward(int n, const RewardConfig& config) {
    if (n < 0) throw Error("demo_count_reward: n must be >= 0");
    if (n > config.demo_cap) return 0.0;
    return static_cast<double>(n) / static_cast<double>(config.target_demos);
}

RewardBreakdown total_reward(const TokenLogProbs& logprobs, bool correct, bool truncated,
                             int n_demos, const RewardConfig& config) {
    config.validate();
    const LogProbReward lp = log_prob_reward(logprobs);
    RewardBreakdown breakdown;
    breakdown.l_llm = lp.l_llm;
    breakdown.r_p = lp.r_p;
    breakdown.r_acc = accuracy_reward(correct, truncated);
    breakdown.r_demo = demo_count_reward(n_demos, config);
    breakdown.n_demos = n_demos;
    breakdown.truncated = truncated;
    breakdown.total = breakdown.r_p + breakdown.r_acc + breakdown.r_demo;
    return breakdown;
}

std::vector<double> group_advantages(const std::vector<double>& rewards) {
    if (rewards.size() < 2) throw Error("group_advantages: group size must be >= 2");
    const double n = static_cast<double>(rewards.size());
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= n;
    double variance = 0.0;
    for (double r : rewards) variance += (r - mean) * (r - mean);
    variance /= n;
    const double std_pop = std::sqrt(variance);
    std::vector<double> advantages(rewards.size(), 0.0);
    if (std_pop < 1e-12) return advantages;  // zero-variance guard
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        advantages[i] = (rewards[i] - mean) / std_pop;
    }
    return advantages;
}

namespace {

// Uniform draw in [0, 1) with 53 bits; sampling stays identical across
// standard libraries.
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * (1.0 / 9007199254740992.0);
}

std::vector<double> softmax(const std::vector<double>& preferences) {
    const double peak = *std::max_element(preferences.begin(), preferences.end());
    std::vector<double> probabilities(preferences.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < preferences.size(); ++i) {
        probabilities[i] = std::exp(preferences[i] - peak);
        sum += probabilities[i];
    }
    for (auto& p : probabilities) p /= sum;
    return probabilities;
}

std::size_t sample_index(const std::vector<double>& probabilities, std::mt19937_64& gen) {
    const double u = uniform01(gen);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative) return i;
    }
    return probabilities.size() - 1;
}

}  // namespace

BanditResult bandit_sim(const std::vector<BanditCandidate>& candidates, int steps,
                        double learning_rate, int group_size, std::uint64_t seed) {
    if (candidates.size() < 2) throw Error("bandit_sim: need at least 2 candidates");
    if (steps < 0) throw Error("bandit_sim: steps must be >= 0");
    if (group_size < 2) throw Error("bandit_sim: group_size must be >= 2");
    if (learning_rate <= 0.0) throw Error("bandit_sim: learning_rate must be positive");

    const std::size_t n = candidates.size();
    std::vector<double> preferences(n, 0.0);
    std::mt19937_64 gen(seed);

    for (int step = 0; step < steps; ++step) {
        const auto probabilities = softmax(preferences);
        std::vector<std::size_t> actions(static_cast<std::size_t>(group_size));
        std::vector<double> rewards(actions.size());
        for (std::size_t g = 0; g < actions.size(); ++g) {
            actions[g] = sample_index(probabilities, gen);
            rewards[g] = candidates[actions[g]].reward.total;
        }
        const auto advantages = group_advantages(rewards);
        // Log-linear policy gradient with the group-relative baseline:
        // h += lr * A * (1{a} - pi), accumulated over the sampled group.
        for (std::size_t g = 0; g < actions.size(); ++g) {
            for (std::size_t i = 0; i < n; ++i) {
                const double indicator = i == actions[g] ? 1.0 : 0.0;
                preferences[i] += learning_rate * advantages[g] * (indicator - probabilities[i]);
            }
        }
    }

    BanditResult result;
    result.preferences = preferences;
    result.probabilities = softmax(preferences);
    result.best = static_cast<int>(std::distance(
        result.probabilities.begin(),
        std::max_element(result.probabilities.begin(), result.probabilities.end())));
    return result;
}

}  // namespace demokit
