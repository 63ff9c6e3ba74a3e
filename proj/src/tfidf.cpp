#include "demokit/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "demokit/text.hpp"
#include "demokit/types.hpp"

namespace demokit {

double sparse_dot(const SparseVector& a, const SparseVector& b) {
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        auto ta = a.entries[i].first;
        auto tb = b.entries[j].first;
        if (ta == tb) {
            dot += a.entries[i].second * b.entries[j].second;
            ++i;
            ++j;
        } else if (ta < tb) {
            ++i;
        } else {
            ++j;
        }
    }
    return dot;
}

TfidfModel TfidfModel::fit(const std::vector<std::string>& docs) {
    TfidfModel model;
    std::vector<std::int32_t> df;
    for (const auto& doc : docs) {
        auto terms = text::tfidf_terms(doc);
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        for (const auto& term : terms) {
            auto [it, inserted] = model.vocab_.try_emplace(
                term, static_cast<std::int32_t>(model.terms_.size()));
            if (inserted) {
                model.terms_.push_back(term);
                df.push_back(0);
            }
            df[static_cast<std::size_t>(it->second)] += 1;
        }
    }
    const double n = static_cast<double>(docs.size());
    model.idf_.resize(df.size());
    for (std::size_t t = 0; t < df.size(); ++t) {
        model.idf_[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[t]))) + 1.0;
    }
    return model;
}

SparseVector TfidfModel::transform(std::string_view textual) const {
    std::map<std::int32_t, double> weights;
    for (const auto& term : text::tfidf_terms(textual)) {
        auto it = vocab_.find(term);
        if (it == vocab_.end()) continue;  // out-of-vocabulary terms are dropped
        weights[it->second] += idf_[static_cast<std::size_t>(it->second)];
    }
    SparseVector v;
    v.entries.assign(weights.begin(), weights.end());
    double norm_sq = 0.0;
    for (const auto& [term, w] : v.entries) norm_sq += w * w;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [term, w] : v.entries) w *= inv;
    }
    return v;
}

std::vector<double> TfidfModel::transform_dense(std::string_view textual) const {
    std::vector<double> dense(terms_.size(), 0.0);
    for (const auto& [term, w] : transform(textual).entries) {
        dense[static_cast<std::size_t>(term)] = w;
    }
    return dense;
}

nlohmann::json TfidfModel::to_json() const {
    return nlohmann::json{{"terms", terms_}, {"idf", idf_}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
    TfidfModel model;
    model.terms_ = j.at("terms").get<std::vector<std::string>>();
    model.idf_ = j.at("idf").get<std::vector<double>>();
    if (model.terms_.size() != model.idf_.size()) {
        throw ParseError("tfidf state: terms/idf length mismatch");
    }
    model.vocab_.reserve(model.terms_.size());
    for (std::size_t t = 0; t < model.terms_.size(); ++t) {
        model.vocab_.emplace(model.terms_[t], static_cast<std::int32_t>(t));
    }
    return model;
}

}  // namespace demokit
