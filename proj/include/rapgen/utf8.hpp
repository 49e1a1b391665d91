#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rapgen::utf8 {

// Decodes the code point starting at byte offset `i` and advances `i`.
// Malformed bytes decode as U+FFFD and advance by one byte.
inline char32_t next(std::string_view s, size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) { i += 1; return b0; }
    auto cont = [&](size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto cb = [&](size_t k) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
    };
    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | cb(1);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x0F) << 12) | (cb(1) << 6) | cb(2);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) | (cb(1) << 12) |
                      (cb(2) << 6) | cb(3);
        i += 4;
        return cp;
    }
    i += 1;
    return 0xFFFD;
}

// Splits into code points, each re-encoded as a UTF-8 string.
inline std::vector<std::string> codepoints(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        const size_t start = i;
        next(s, i);
        out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

// CJK unified ideographs (the ranges relevant for character-level lyrics).
inline bool is_cjk(char32_t cp) {
    return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
           (cp >= 0xF900 && cp <= 0xFAFF);
}

// Last code point of a UTF-8 string, as a string; empty input yields "".
inline std::string last_codepoint(std::string_view s) {
    std::string last;
    size_t i = 0;
    while (i < s.size()) {
        const size_t start = i;
        next(s, i);
        last.assign(s.substr(start, i - start));
    }
    return last;
}

}  // namespace rapgen::utf8
