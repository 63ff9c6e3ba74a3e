#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "demokit/budget.hpp"
#include "demokit/types.hpp"

namespace demokit {

// One record per line:
// {"id","question","cot","answer","kind":"numeric"|"mcq","choices":[{letter,text}]?}
// cot may be omitted (defaults to empty); choices are required iff kind is mcq.
std::vector<QueryRecord> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, const std::vector<QueryRecord>& records);

// Removes every record whose question has TF-IDF cosine similarity of exactly
// 1 (within 1e-12) against an earlier record. First occurrence wins, relative
// order is preserved.
std::vector<QueryRecord> dedup(const std::vector<QueryRecord>& records);

// Deterministic seeded shuffle, then: test = floor(0.10 N); of the remaining
// M, evaluation = floor(0.10 M), rag = floor(0.25 M), train = the rest.
CorpusSplits split(const std::vector<QueryRecord>& records, std::uint64_t seed);

Demonstration format_demonstration(const QueryRecord& record, const Tokenizer& tokenizer);

// Writes test/evaluation/rag/train JSONL files plus manifest.json with the
// seed and per-split counts.
void save_splits(const CorpusSplits& splits, const std::filesystem::path& dir);

}  // namespace demokit
