#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lexdiv {

// Code points carrying the Unicode White_Space property.
inline bool is_unicode_whitespace(char32_t cp) {
    switch (cp) {
        case 0x0009:
        case 0x000A:
        case 0x000B:
        case 0x000C:
        case 0x000D:
        case 0x0020:
        case 0x0085:
        case 0x00A0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Decodes the UTF-8 code point starting at s[i] and advances i past it.
// Malformed bytes are consumed one at a time and returned as-is, so the
// caller sees them as opaque (non-whitespace) characters.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    const auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    const auto tail = [&](std::size_t k) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
    };
    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        const char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | tail(1);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        const char32_t cp =
            (static_cast<char32_t>(b0 & 0x0F) << 12) | (tail(1) << 6) | tail(2);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        const char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
                            (tail(1) << 12) | (tail(2) << 6) | tail(3);
        i += 4;
        return cp;
    }
    ++i;
    return b0;
}

// A tokenized text: the ordered word list plus the cached unique-word count.
// Immutable after construction.
class word_sequence {
  public:
    word_sequence() = default;

    explicit word_sequence(std::vector<std::string> words)
        : words_(std::move(words)) {
        std::unordered_set<std::string_view> distinct;
        distinct.reserve(words_.size());
        for (const auto& w : words_) distinct.insert(w);
        vocab_size_ = distinct.size();
    }

    const std::vector<std::string>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }
    std::size_t vocab_size() const { return vocab_size_; }
    bool empty() const { return words_.empty(); }

  private:
    std::vector<std::string> words_;
    std::size_t vocab_size_ = 0;
};

// Splits text into maximal runs of non-whitespace characters. No case
// folding, no punctuation stripping. Total: any byte sequence tokenizes.
inline word_sequence tokenize(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    std::size_t word_start = 0;
    bool in_word = false;
    while (i < text.size()) {
        const std::size_t at = i;
        const char32_t cp = decode_utf8(text, i);
        if (is_unicode_whitespace(cp)) {
            if (in_word) {
                words.emplace_back(text.substr(word_start, at - word_start));
                in_word = false;
            }
        } else if (!in_word) {
            word_start = at;
            in_word = true;
        }
    }
    if (in_word) words.emplace_back(text.substr(word_start));
    return word_sequence(std::move(words));
}

inline std::string join_words(const std::vector<std::string>& words,
                              std::size_t limit = SIZE_MAX) {
    const std::size_t n = std::min(words.size(), limit);
    std::size_t bytes = 0;
    for (std::size_t i = 0; i < n; ++i) bytes += words[i].size() + 1;
    std::string out;
    out.reserve(bytes);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out.push_back(' ');
        out.append(words[i]);
    }
    return out;
}

// Maps tokens to dense ids in order of first appearance. Ids are contiguous
// in [0, vocab_size).
inline std::vector<std::uint32_t> dense_ids(const std::vector<std::string>& tokens) {
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    std::unordered_map<std::string_view, std::uint32_t> table;
    table.reserve(tokens.size());
    for (const auto& tok : tokens) {
        const auto [it, inserted] =
            table.emplace(tok, static_cast<std::uint32_t>(table.size()));
        ids.push_back(it->second);
    }
    return ids;
}

}  // namespace lexdiv
