#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "demokit/types.hpp"

namespace demokit {

enum class ExtractionMethod { format_marker, regex_fallback, failed };

std::string to_string(ExtractionMethod method);

struct ExtractionResult {
    std::optional<double> numeric_value;
    std::optional<char> mcq_letter;
    ExtractionMethod method = ExtractionMethod::failed;
    std::string raw_span;

    bool ok() const { return method != ExtractionMethod::failed; }
};

// Prefers the value on the last `#### <value>` marker line; falls back to the
// last integer/decimal/fraction anywhere in the text. Total over arbitrary
// input: failure is a result state, never an exception.
ExtractionResult extract_numeric(std::string_view textual);

// Prefers the letter on the last marker line (brackets and noise tolerated,
// e.g. "#### [B]" or "#### [correct letter]: B"); falls back to the last
// standalone capital A-D.
ExtractionResult extract_mcq(std::string_view textual);

ExtractionResult extract_answer(std::string_view textual, AnswerKind kind);

// Numeric: absolute tolerance 1e-4. MCQ: exact letter match. A failed
// extraction is never correct. Throws Error when gold cannot be parsed.
bool is_correct(const ExtractionResult& pred, const std::string& gold, AnswerKind kind);

// Last number in `s` under the extraction grammar (commas stripped, leading
// sign honored, fractions a/b evaluated). Throws Error when none is found.
double parse_gold_numeric(const std::string& s);

inline constexpr double kNumericTolerance = 1e-4;

}  // namespace demokit
