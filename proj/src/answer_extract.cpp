#include "demokit/answer_extract.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "demokit/text.hpp"

namespace demokit {

namespace {

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

bool is_alnum(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

struct NumberMatch {
    double value = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Parses one number starting at `i` (which must point at a digit, or a sign
// or '.' leading into one). Accepts 1,234-style comma groups, decimals, and
// simple fractions a/b.
std::optional<NumberMatch> parse_number_at(std::string_view s, std::size_t i) {
    const std::size_t begin = i;
    std::size_t pos = i;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
    }

    std::string digits;
    bool has_int = false;
    bool has_commas = false;
    while (pos < s.size() && is_digit(s[pos])) {
        digits += s[pos++];
        has_int = true;
    }
    if (has_int && digits.size() <= 3) {
        // Comma groups: ",ddd" repeated, not followed by a fourth digit.
        std::size_t probe = pos;
        std::string grouped = digits;
        while (probe + 3 < s.size() && s[probe] == ',' && is_digit(s[probe + 1]) &&
               is_digit(s[probe + 2]) && is_digit(s[probe + 3]) &&
               (probe + 4 >= s.size() || !is_digit(s[probe + 4]))) {
            grouped += s.substr(probe + 1, 3);
            probe += 4;
            has_commas = true;
        }
        if (has_commas) {
            digits = grouped;
            pos = probe;
        }
    }

    bool has_frac_part = false;
    std::string frac_digits;
    if (pos < s.size() && s[pos] == '.' && pos + 1 < s.size() && is_digit(s[pos + 1])) {
        ++pos;
        while (pos < s.size() && is_digit(s[pos])) {
            frac_digits += s[pos++];
        }
        has_frac_part = true;
    }
    if (!has_int && !has_frac_part) return std::nullopt;

    double value = 0.0;
    {
        std::string literal = digits.empty() ? "0" : digits;
        if (has_frac_part) literal += "." + frac_digits;
        value = std::strtod(literal.c_str(), nullptr);
    }

    // Simple fraction a/b: integer numerator, positive integer denominator.
    if (has_int && !has_frac_part && !has_commas) {
        std::size_t probe = pos;
        if (probe < s.size() && s[probe] == ' ') ++probe;
        if (probe < s.size() && s[probe] == '/') {
            ++probe;
            if (probe < s.size() && s[probe] == ' ') ++probe;
            std::string denom;
            while (probe < s.size() && is_digit(s[probe])) {
                denom += s[probe++];
            }
            const bool denom_extends = probe < s.size() && (s[probe] == '.' || is_alnum(s[probe]));
            if (!denom.empty() && !denom_extends) {
                const double d = std::strtod(denom.c_str(), nullptr);
                if (d != 0.0) {
                    value /= d;
                    pos = probe;
                }
            }
        }
    }

    if (negative) value = -value;
    return NumberMatch{value, begin, pos};
}

std::vector<NumberMatch> scan_numbers(std::string_view s) {
    std::vector<NumberMatch> matches;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        const bool sign_start = (c == '+' || c == '-') && i + 1 < s.size() &&
                                (is_digit(s[i + 1]) ||
                                 (s[i + 1] == '.' && i + 2 < s.size() && is_digit(s[i + 2]))) &&
                                (i == 0 || !is_alnum(s[i - 1]));
        const bool dot_start = c == '.' && i + 1 < s.size() && is_digit(s[i + 1]) &&
                               (i == 0 || !is_digit(s[i - 1]));
        if (is_digit(c) || sign_start || dot_start) {
            if (auto match = parse_number_at(s, i)) {
                matches.push_back(*match);
                i = match->end;
                continue;
            }
        }
        ++i;
    }
    return matches;
}

// Byte offsets of every answer-marker occurrence, first to last.
std::vector<std::size_t> marker_positions(std::string_view s) {
    std::vector<std::size_t> positions;
    std::size_t pos = 0;
    const std::string_view marker{kAnswerMarker};
    while ((pos = s.find(marker, pos)) != std::string_view::npos) {
        positions.push_back(pos);
        pos += marker.size();
    }
    return positions;
}

std::string_view marker_line_content(std::string_view s, std::size_t marker_pos) {
    std::size_t content_begin = marker_pos + 4;
    // Consecutive '#' beyond the marker (e.g. "#####") belong to the marker.
    while (content_begin < s.size() && s[content_begin] == '#') ++content_begin;
    auto content = s.substr(content_begin);
    const auto line_end = content.find('\n');
    if (line_end != std::string_view::npos) content = content.substr(0, line_end);
    return content;
}

std::optional<char> last_standalone_letter(std::string_view s) {
    std::optional<char> found;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c < 'A' || c > 'D') continue;
        const bool left_ok = i == 0 || !is_alnum(s[i - 1]);
        const bool right_ok = i + 1 == s.size() || !is_alnum(s[i + 1]);
        if (left_ok && right_ok) found = c;
    }
    return found;
}

}  // namespace

std::string to_string(ExtractionMethod method) {
    switch (method) {
        case ExtractionMethod::format_marker: return "format_marker";
        case ExtractionMethod::regex_fallback: return "regex_fallback";
        case ExtractionMethod::failed: return "failed";
    }
    return "failed";
}

ExtractionResult extract_numeric(std::string_view textual) {
    ExtractionResult result;
    const auto markers = marker_positions(textual);
    for (auto it = markers.rbegin(); it != markers.rend(); ++it) {
        const auto content = marker_line_content(textual, *it);
        const auto numbers = scan_numbers(content);
        if (!numbers.empty()) {
            const auto& match = numbers.back();
            result.numeric_value = match.value;
            result.method = ExtractionMethod::format_marker;
            result.raw_span = std::string{content.substr(match.begin, match.end - match.begin)};
            return result;
        }
    }
    const auto numbers = scan_numbers(textual);
    if (!numbers.empty()) {
        const auto& match = numbers.back();
        result.numeric_value = match.value;
        result.method = ExtractionMethod::regex_fallback;
        result.raw_span = std::string{textual.substr(match.begin, match.end - match.begin)};
        return result;
    }
    return result;  // failed
}

ExtractionResult extract_mcq(std::string_view textual) {
    ExtractionResult result;
    const auto markers = marker_positions(textual);
    for (auto it = markers.rbegin(); it != markers.rend(); ++it) {
        const auto content = marker_line_content(textual, *it);
        if (auto letter = last_standalone_letter(content)) {
            result.mcq_letter = *letter;
            result.method = ExtractionMethod::format_marker;
            result.raw_span = std::string{text::trim(content)};
            return result;
        }
    }
    if (auto letter = last_standalone_letter(textual)) {
        result.mcq_letter = *letter;
        result.method = ExtractionMethod::regex_fallback;
        result.raw_span = std::string(1, *letter);
        return result;
    }
    return result;  // failed
}

ExtractionResult extract_answer(std::string_view textual, AnswerKind kind) {
    return kind == AnswerKind::numeric ? extract_numeric(textual) : extract_mcq(textual);
}

double parse_gold_numeric(const std::string& s) {
    const auto numbers = scan_numbers(s);
    if (numbers.empty()) throw Error("unparseable gold value \"" + s + "\"");
    return numbers.back().value;
}

bool is_correct(const ExtractionResult& pred, const std::string& gold, AnswerKind kind) {
    if (!pred.ok()) return false;
    if (kind == AnswerKind::numeric) {
        if (!pred.numeric_value) return false;
        const double gold_value = parse_gold_numeric(gold);
        // The 1e-12 slack absorbs double rounding exactly at the boundary.
        return std::abs(*pred.numeric_value - gold_value) <= kNumericTolerance + 1e-12;
    }
    if (!pred.mcq_letter) return false;
    const auto trimmed = text::trim(gold);
    std::optional<char> gold_letter;
    if (trimmed.size() == 1 && trimmed[0] >= 'A' && trimmed[0] <= 'D') {
        gold_letter = trimmed[0];
    } else {
        gold_letter = last_standalone_letter(trimmed);
    }
    if (!gold_letter) throw Error("unparseable gold value \"" + gold + "\"");
    return *pred.mcq_letter == *gold_letter;
}

}  // namespace demokit
