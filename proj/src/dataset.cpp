#include "demokit/dataset.hpp"

#include <fstream>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "demokit/tfidf.hpp"

namespace demokit {

namespace {

using nlohmann::json;

json record_to_json(const QueryRecord& record) {
    nlohmann::ordered_json j{{"id", record.id},
                             {"question", record.question},
                             {"cot", record.cot},
                             {"answer", record.gold_answer},
                             {"kind", to_string(record.answer_kind)}};
    if (record.answer_kind == AnswerKind::mcq) {
        auto choices = nlohmann::ordered_json::array();
        for (const auto& choice : record.choices) {
            choices.push_back({{"letter", choice.letter}, {"text", choice.text}});
        }
        j["choices"] = choices;
    }
    return j;
}

QueryRecord record_from_json(const json& j, int line) {
    QueryRecord record;
    for (const char* field : {"id", "question", "answer", "kind"}) {
        if (!j.contains(field)) {
            throw ParseError(std::string{"missing required field \""} + field + "\"", line);
        }
    }
    record.id = j.at("id").get<std::string>();
    record.question = j.at("question").get<std::string>();
    record.cot = j.value("cot", std::string{});
    record.gold_answer = j.at("answer").get<std::string>();
    record.answer_kind = answer_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("choices")) {
        for (const auto& choice : j.at("choices")) {
            record.choices.push_back({choice.at("letter").get<std::string>(),
                                      choice.at("text").get<std::string>()});
        }
    }
    try {
        record.validate();
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
    return record;
}

// Unbiased bounded draw; keeps shuffles identical across standard libraries.
std::uint64_t bounded_rand(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value;
    do {
        value = gen();
    } while (value >= limit);
    return value % bound;
}

}  // namespace

std::string to_string(AnswerKind kind) {
    return kind == AnswerKind::numeric ? "numeric" : "mcq";
}

AnswerKind answer_kind_from_string(const std::string& s) {
    if (s == "numeric") return AnswerKind::numeric;
    if (s == "mcq") return AnswerKind::mcq;
    throw ParseError("unknown answer kind \"" + s + "\"");
}

void QueryRecord::validate() const {
    if (id.empty()) throw ParseError("record id must be non-empty");
    if (question.empty()) throw ParseError("record \"" + id + "\": question is empty");
    if (gold_answer.empty()) throw ParseError("record \"" + id + "\": answer is empty");
    if (answer_kind == AnswerKind::mcq) {
        if (choices.empty()) {
            throw ParseError("record \"" + id + "\": mcq record requires choices");
        }
        std::unordered_set<std::string> letters;
        for (const auto& choice : choices) {
            if (choice.letter.size() != 1 || choice.letter[0] < 'A' || choice.letter[0] > 'D') {
                throw ParseError("record \"" + id + "\": choice letters must be A-D");
            }
            if (!letters.insert(choice.letter).second) {
                throw ParseError("record \"" + id + "\": duplicate choice letter " +
                                 choice.letter);
            }
        }
    } else if (!choices.empty()) {
        throw ParseError("record \"" + id + "\": numeric record must not carry choices");
    }
}

std::vector<QueryRecord> load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file " + path.string());
    std::vector<QueryRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError("malformed JSON", line_no);
        records.push_back(record_from_json(j, line_no));
        if (!seen_ids.insert(records.back().id).second) {
            throw ParseError("duplicate id \"" + records.back().id + "\"", line_no);
        }
    }
    return records;
}

void save_corpus(const std::filesystem::path& path, const std::vector<QueryRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus file " + path.string());
    for (const auto& record : records) out << record_to_json(record).dump() << "\n";
}

std::vector<QueryRecord> dedup(const std::vector<QueryRecord>& records) {
    if (records.empty()) return {};
    std::vector<std::string> questions;
    questions.reserve(records.size());
    for (const auto& record : records) questions.push_back(record.question);
    const TfidfModel model = TfidfModel::fit(questions);

    std::vector<SparseVector> vectors;
    vectors.reserve(records.size());
    for (const auto& question : questions) vectors.push_back(model.transform(question));

    std::vector<bool> removed(records.size(), false);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (removed[i]) continue;
        for (std::size_t j = i + 1; j < records.size(); ++j) {
            if (removed[j]) continue;
            // Unit vectors; a pair of all-OOV (empty) questions also counts
            // as identical.
            const bool duplicate =
                vectors[i].empty()
                    ? vectors[j].empty()
                    : sparse_dot(vectors[i], vectors[j]) >= 1.0 - 1e-12;
            if (duplicate) removed[j] = true;
        }
    }
    std::vector<QueryRecord> kept;
    kept.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!removed[i]) kept.push_back(records[i]);
    }
    return kept;
}

CorpusSplits split(const std::vector<QueryRecord>& records, std::uint64_t seed) {
    const std::size_t n = records.size();
    if (n < 10) {
        throw Error("split requires at least 10 records, got " + std::to_string(n));
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 gen(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = bounded_rand(gen, static_cast<std::uint64_t>(i) + 1);
        std::swap(order[i], order[static_cast<std::size_t>(j)]);
    }

    const std::size_t test_n = n / 10;
    const std::size_t remainder = n - test_n;
    const std::size_t eval_n = remainder / 10;
    const std::size_t rag_n = remainder / 4;

    CorpusSplits splits;
    splits.seed = seed;
    std::size_t pos = 0;
    auto take = [&](std::vector<QueryRecord>& out, std::size_t count) {
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) out.push_back(records[order[pos++]]);
    };
    take(splits.test, test_n);
    take(splits.evaluation, eval_n);
    take(splits.rag, rag_n);
    take(splits.train, remainder - eval_n - rag_n);
    return splits;
}

Demonstration format_demonstration(const QueryRecord& record, const Tokenizer& tokenizer) {
    if (record.question.empty() || record.gold_answer.empty()) {
        throw Error("format_demonstration requires question and answer");
    }
    Demonstration demo;
    demo.question = record.question;
    demo.cot = record.cot;
    demo.answer = record.gold_answer;
    std::string rendered = "Question: " + record.question + "\n";
    if (record.answer_kind == AnswerKind::mcq) {
        for (const auto& choice : record.choices) {
            rendered += choice.letter + ". " + choice.text + "\n";
        }
    }
    if (!record.cot.empty()) rendered += record.cot + "\n";
    rendered += std::string{kAnswerMarker} + " " + record.gold_answer + "\n" + kEndDemoToken;
    demo.rendered = std::move(rendered);
    demo.token_count = tokenizer.count(demo.rendered);
    return demo;
}

void save_splits(const CorpusSplits& splits, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_corpus(dir / "test.jsonl", splits.test);
    save_corpus(dir / "evaluation.jsonl", splits.evaluation);
    save_corpus(dir / "rag.jsonl", splits.rag);
    save_corpus(dir / "train.jsonl", splits.train);
    nlohmann::ordered_json manifest{
        {"seed", splits.seed},
        {"counts",
         {{"test", splits.test.size()},
          {"evaluation", splits.evaluation.size()},
          {"rag", splits.rag.size()},
          {"train", splits.train.size()}}},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
}

}  // namespace demokit
