#include "demokit/text.hpp"

#include <array>
#include <cctype>

namespace demokit::text {

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(unsigned char c) {
    return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
           (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
}

// Decodes one UTF-8 code point starting at i; advances i past it. Invalid
// bytes are consumed one at a time and returned as-is.
char32_t next_code_point(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((c & 0xe0) == 0xc0) {
        extra = 1;
        cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
        extra = 2;
        cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
        extra = 3;
        cp = c & 0x07;
    } else {
        ++i;
        return c;
    }
    if (i + static_cast<std::size_t>(extra) >= s.size()) {
        ++i;
        return c;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cont = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cont & 0xc0) != 0x80) {
            ++i;
            return c;
        }
        cp = (cp << 6) | (cont & 0x3f);
    }
    i += static_cast<std::size_t>(extra) + 1;
    return cp;
}

bool is_unicode_space(char32_t cp) {
    if (cp < 0x80) return is_ascii_space(static_cast<unsigned char>(cp));
    switch (cp) {
        case 0x00a0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202f:
        case 0x205f:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200a;
    }
}

bool is_unicode_punct(char32_t cp) {
    if (cp < 0x80) return is_ascii_punct(static_cast<unsigned char>(cp));
    if (cp >= 0x2010 && cp <= 0x2027) return true;   // dashes, quotes, bullets
    if (cp >= 0x2030 && cp <= 0x205e) return true;   // permille .. general punct
    if (cp >= 0x3001 && cp <= 0x303f) return true;   // CJK punctuation
    if (cp >= 0xff01 && cp <= 0xff0f) return true;   // fullwidth punctuation
    if (cp >= 0xff1a && cp <= 0xff20) return true;
    if (cp >= 0xff3b && cp <= 0xff40) return true;
    if (cp >= 0xff5b && cp <= 0xff65) return true;
    return cp == 0x00a1 || cp == 0x00bf || cp == 0x00b7;
}

}  // namespace

std::vector<TokenSpan> builtin_token_spans(std::string_view s) {
    std::vector<TokenSpan> spans;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (is_ascii_space(c)) {
            ++i;
            continue;
        }
        if (is_ascii_punct(c)) {
            spans.push_back({i, i + 1});
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < s.size()) {
            unsigned char w = static_cast<unsigned char>(s[i]);
            if (is_ascii_space(w) || is_ascii_punct(w)) break;
            ++i;
        }
        spans.push_back({begin, i});
    }
    return spans;
}

int builtin_count(std::string_view s) {
    return static_cast<int>(builtin_token_spans(s).size());
}

std::vector<std::string> tfidf_terms(std::string_view s) {
    std::vector<std::string> terms;
    std::string current;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t start = i;
        char32_t cp = next_code_point(s, i);
        if (is_unicode_space(cp) || is_unicode_punct(cp)) {
            if (!current.empty()) {
                terms.push_back(current);
                current.clear();
            }
            continue;
        }
        if (cp < 0x80) {
            current.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(cp))));
        } else {
            current.append(s.substr(start, i - start));
        }
    }
    if (!current.empty()) terms.push_back(current);
    return terms;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

}  // namespace demokit::text
