#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace demokit {

// L2-normalized sparse vector; entries sorted by term id.
struct SparseVector {
    std::vector<std::pair<std::int32_t, double>> entries;
    bool empty() const { return entries.empty(); }
};

double sparse_dot(const SparseVector& a, const SparseVector& b);

// TF-IDF over the shared term tokenizer: raw term frequency, smoothed
// inverse document frequency ln((1+N)/(1+df)) + 1, L2-normalized.
class TfidfModel {
public:
    static TfidfModel fit(const std::vector<std::string>& docs);

    SparseVector transform(std::string_view textual) const;
    std::vector<double> transform_dense(std::string_view textual) const;

    std::size_t vocab_size() const { return terms_.size(); }

    nlohmann::json to_json() const;
    static TfidfModel from_json(const nlohmann::json& j);

private:
    std::unordered_map<std::string, std::int32_t> vocab_;
    std::vector<std::string> terms_;  // id -> term, in first-encounter order
    std::vector<double> idf_;
};

}  // namespace demokit
