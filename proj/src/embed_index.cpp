#include "demokit/embed_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace demokit {

namespace {

using nlohmann::json;

constexpr int kIndexFileVersion = 1;

}  // namespace

void EmbeddingVector::validate() const {
    if (values.empty()) throw Error("embedding vector must be non-empty");
    for (double v : values) {
        if (!std::isfinite(v)) throw Error("embedding vector has non-finite entries");
    }
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw Error("cosine: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()) + ")");
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) throw Error("cosine: undefined for zero vectors");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

VectorIndex::VectorIndex(std::string provider_tag, std::size_t dim)
    : provider_tag_(std::move(provider_tag)),
      dim_(dim),
      provider_state_(std::make_shared<json>(json::object())) {
    if (dim_ == 0) throw Error("index dimension must be positive");
}

void VectorIndex::add(IndexEntry entry) {
    entry.embedding.validate();
    if (entry.embedding.dim() != dim_) {
        throw Error("index entry \"" + entry.id + "\": dimension " +
                    std::to_string(entry.embedding.dim()) + " != index dimension " +
                    std::to_string(dim_));
    }
    if (find(entry.id) != nullptr) {
        throw Error("index entry \"" + entry.id + "\": duplicate id");
    }
    entries_.push_back(std::move(entry));
}

const IndexEntry* VectorIndex::find(const std::string& id) const {
    for (const auto& entry : entries_) {
        if (entry.id == id) return &entry;
    }
    return nullptr;
}

std::vector<ScoredId> VectorIndex::top_k(const EmbeddingVector& query, std::size_t k) const {
    if (k == 0 || k > entries_.size()) {
        throw Error("top_k: k=" + std::to_string(k) + " out of range for index of size " +
                    std::to_string(entries_.size()));
    }
    std::vector<ScoredId> scored;
    scored.reserve(entries_.size());
    for (const auto& entry : entries_) {
        scored.push_back({entry.id, cosine(query, entry.embedding)});
    }
    auto better = [](const ScoredId& a, const ScoredId& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                      scored.end(), better);
    scored.resize(k);
    return scored;
}

void VectorIndex::save(const std::filesystem::path& path) const {
    json entries = json::array();
    for (const auto& entry : entries_) {
        entries.push_back(json{{"id", entry.id},
                               {"embedding", entry.embedding.values},
                               {"text", entry.rendered}});
    }
    json file{{"version", kIndexFileVersion},
              {"provider_tag", provider_tag_},
              {"dim", dim_},
              {"count", entries_.size()},
              {"provider_state", *provider_state_},
              {"entries", std::move(entries)}};
    std::ofstream out(path);
    if (!out) throw Error("cannot write index file " + path.string());
    out << file.dump() << "\n";
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open index file " + path.string());
    json file = json::parse(in, nullptr, false);
    if (file.is_discarded()) throw ParseError("index file is not valid JSON");
    if (file.value("version", 0) != kIndexFileVersion) {
        throw ParseError("unsupported index file version");
    }
    VectorIndex index(file.at("provider_tag").get<std::string>(),
                      file.at("dim").get<std::size_t>());
    *index.provider_state_ = file.value("provider_state", json::object());
    for (const auto& entry : file.at("entries")) {
        index.add({entry.at("id").get<std::string>(),
                   EmbeddingVector{entry.at("embedding").get<std::vector<double>>()},
                   entry.at("text").get<std::string>()});
    }
    if (index.size() != file.at("count").get<std::size_t>()) {
        throw ParseError("index file count does not match entries");
    }
    return index;
}

SimilarityReport dataset_similarity(const std::vector<EmbeddingVector>& eval_vectors,
                                    const std::vector<EmbeddingVector>& train_vectors,
                                    const std::string& dataset_name) {
    if (train_vectors.size() < 2) {
        throw Error("dataset_similarity requires at least 2 train vectors");
    }
    SimilarityReport report;
    report.dataset_name = dataset_name;
    report.per_sample_scores.reserve(eval_vectors.size());
    for (const auto& ev : eval_vectors) {
        double best = -2.0, second = -2.0;
        for (const auto& tv : train_vectors) {
            const double score = cosine(ev, tv);
            if (score > best) {
                second = best;
                best = score;
            } else if (score > second) {
                second = score;
            }
        }
        report.per_sample_scores.push_back((best + second) / 2.0);
    }
    double sum = 0.0;
    for (double s : report.per_sample_scores) sum += s;
    report.score = report.per_sample_scores.empty()
                       ? 0.0
                       : sum / static_cast<double>(report.per_sample_scores.size());
    return report;
}

std::vector<EmbeddingVector> embed_remote(const EndpointConfig& endpoint,
                                          const std::vector<std::string>& texts,
                                          std::shared_ptr<Transport> transport) {
    LlmClient client(endpoint, std::move(transport));
    std::vector<EmbeddingVector> vectors;
    vectors.reserve(texts.size());
    for (auto& values : client.embed(texts)) {
        EmbeddingVector v{std::move(values)};
        v.validate();
        vectors.push_back(std::move(v));
    }
    return vectors;
}

TfidfEmbeddingProvider::TfidfEmbeddingProvider(TfidfModel model) : model_(std::move(model)) {}

TfidfEmbeddingProvider TfidfEmbeddingProvider::fit(const std::vector<std::string>& corpus) {
    return TfidfEmbeddingProvider(TfidfModel::fit(corpus));
}

std::vector<EmbeddingVector> TfidfEmbeddingProvider::embed(
    const std::vector<std::string>& texts) const {
    std::vector<EmbeddingVector> vectors;
    vectors.reserve(texts.size());
    for (const auto& t : texts) vectors.push_back(EmbeddingVector{model_.transform_dense(t)});
    return vectors;
}

nlohmann::json TfidfEmbeddingProvider::state() const {
    return model_.to_json();
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(EndpointConfig endpoint,
                                                 std::shared_ptr<Transport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
    if (endpoint_.model.empty()) endpoint_.model = kDefaultEmbeddingModel;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed(
    const std::vector<std::string>& texts) const {
    return embed_remote(endpoint_, texts, transport_);
}

nlohmann::json RemoteEmbeddingProvider::state() const {
    return json{{"endpoint", endpoint_.to_json()}};
}

std::unique_ptr<EmbeddingProvider> provider_from_index(const VectorIndex& index,
                                                       std::shared_ptr<Transport> transport) {
    if (index.provider_tag() == "tfidf") {
        return std::make_unique<TfidfEmbeddingProvider>(
            TfidfModel::from_json(index.provider_state()));
    }
    if (index.provider_tag() == "remote") {
        return std::make_unique<RemoteEmbeddingProvider>(
            EndpointConfig::from_json(index.provider_state().at("endpoint")),
            std::move(transport));
    }
    throw Error("unknown index provider tag \"" + index.provider_tag() + "\"");
}

}  // namespace demokit
