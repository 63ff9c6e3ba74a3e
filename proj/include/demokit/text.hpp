#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace demokit::text {

struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Builtin deterministic tokenizer: whitespace runs separate tokens and every
// ASCII punctuation character is a token of its own. Non-ASCII bytes count as
// word characters. Classification uses fixed tables, independent of locale.
std::vector<TokenSpan> builtin_token_spans(std::string_view s);
int builtin_count(std::string_view s);

// Term tokenizer shared by the TF-IDF embedder: lowercased maximal runs
// between whitespace and punctuation boundaries. ASCII classes plus the
// common Unicode whitespace/punctuation code points.
std::vector<std::string> tfidf_terms(std::string_view s);

std::string_view trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace demokit::text
