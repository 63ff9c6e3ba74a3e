#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "demokit/llm_client.hpp"
#include "demokit/tfidf.hpp"
#include "demokit/types.hpp"

namespace demokit {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    void validate() const;  // non-empty, finite entries
};

// Throws on dimension mismatch or zero vectors (cosine is undefined there).
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

struct IndexEntry {
    std::string id;
    EmbeddingVector embedding;
    std::string rendered;
};

struct ScoredId {
    std::string id;
    double score = 0.0;
};

// Exact brute-force cosine index, immutable once built. Ties in top_k break
// by ascending id.
class VectorIndex {
public:
    VectorIndex(std::string provider_tag, std::size_t dim);

    void add(IndexEntry entry);
    std::vector<ScoredId> top_k(const EmbeddingVector& query, std::size_t k) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t dim() const { return dim_; }
    const std::string& provider_tag() const { return provider_tag_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    const IndexEntry* find(const std::string& id) const;

    nlohmann::json& provider_state() { return *provider_state_; }
    const nlohmann::json& provider_state() const { return *provider_state_; }

    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::string provider_tag_;
    std::size_t dim_;
    std::vector<IndexEntry> entries_;
    std::shared_ptr<nlohmann::json> provider_state_;
};

struct SimilarityReport {
    std::string dataset_name;
    double score = 0.0;  // mean of per_sample_scores
    std::vector<double> per_sample_scores;
};

// Mean over eval samples of the mean top-2 cosine against the train vectors.
SimilarityReport dataset_similarity(const std::vector<EmbeddingVector>& eval_vectors,
                                    const std::vector<EmbeddingVector>& train_vectors,
                                    const std::string& dataset_name = "");

// One vector per text through the endpoint's embedding route; order
// preserved, uniform dimension enforced.
std::vector<EmbeddingVector> embed_remote(const EndpointConfig& endpoint,
                                          const std::vector<std::string>& texts,
                                          std::shared_ptr<Transport> transport = nullptr);

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const = 0;
    virtual std::string tag() const = 0;
    virtual nlohmann::json state() const = 0;
};

// Offline provider: dense TF-IDF vectors in the fitted vocabulary space.
class TfidfEmbeddingProvider : public EmbeddingProvider {
public:
    explicit TfidfEmbeddingProvider(TfidfModel model);
    static TfidfEmbeddingProvider fit(const std::vector<std::string>& corpus);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;
    std::string tag() const override { return "tfidf"; }
    nlohmann::json state() const override;

private:
    TfidfModel model_;
};

class RemoteEmbeddingProvider : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(EndpointConfig endpoint,
                                     std::shared_ptr<Transport> transport = nullptr);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;
    std::string tag() const override { return "remote"; }
    nlohmann::json state() const override;

private:
    EndpointConfig endpoint_;
    std::shared_ptr<Transport> transport_;
};

// Reconstructs the provider persisted alongside an index.
std::unique_ptr<EmbeddingProvider> provider_from_index(
    const VectorIndex& index, std::shared_ptr<Transport> transport = nullptr);

inline constexpr const char* kDefaultEmbeddingModel = "all-mpnet-base-v2";

}  // namespace demokit
