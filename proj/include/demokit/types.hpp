#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace demokit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration; aborts a run before any query is attempted.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed input data, carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// Connection-level failure after retries were exhausted.
class TransportError : public Error {
public:
    using Error::Error;
};

enum class AnswerKind { numeric, mcq };

std::string to_string(AnswerKind kind);
AnswerKind answer_kind_from_string(const std::string& s);

struct Choice {
    std::string letter;
    std::string text;
};

struct QueryRecord {
    std::string id;
    std::string question;
    std::string cot;
    std::string gold_answer;
    AnswerKind answer_kind = AnswerKind::numeric;
    std::vector<Choice> choices;  // present iff answer_kind == mcq

    // Throws ParseError if invariants do not hold (empty answer, bad choices).
    void validate() const;
};

// A worked example block: question, reasoning, final-answer marker line,
// terminated by the end-of-demo delimiter.
struct Demonstration {
    std::string question;
    std::string cot;
    std::string answer;
    std::string rendered;
    int token_count = 0;
};

struct CorpusSplits {
    std::vector<QueryRecord> test;
    std::vector<QueryRecord> evaluation;
    std::vector<QueryRecord> rag;
    std::vector<QueryRecord> train;
    std::uint64_t seed = 0;
};

inline constexpr const char* kEndDemoToken = "[END_DEMO]";
inline constexpr const char* kAnswerMarker = "####";

}  // namespace demokit
