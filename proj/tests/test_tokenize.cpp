#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "lexdiv/tokenize.hpp"

using lexdiv::join_words;
using lexdiv::tokenize;
using lexdiv::word_sequence;

TEST_CASE("tokenize splits on ASCII whitespace") {
    const auto seq = tokenize("a b a");
    REQUIRE(seq.words() == std::vector<std::string>{"a", "b", "a"});
    REQUIRE(seq.size() == 3);
    REQUIRE(seq.vocab_size() == 2);
}

TEST_CASE("tokenize of empty input") {
    const auto seq = tokenize("");
    REQUIRE(seq.size() == 0);
    REQUIRE(seq.vocab_size() == 0);
    REQUIRE(seq.empty());
}

TEST_CASE("tokenize keeps case and punctuation") {
    const auto seq = tokenize("Hello,  hello");
    REQUIRE(seq.words() == std::vector<std::string>{"Hello,", "hello"});
    REQUIRE(seq.size() == 2);
    REQUIRE(seq.vocab_size() == 2);
}

TEST_CASE("tokenize treats Unicode whitespace as separators") {
    // NBSP, ideographic space, NEL, thin space, line separator
    REQUIRE(tokenize("a b").size() == 2);
    REQUIRE(tokenize("a　b").size() == 2);
    REQUIRE(tokenize("ab").size() == 2);
    REQUIRE(tokenize("a b").size() == 2);
    REQUIRE(tokenize("a b").size() == 2);
    REQUIRE(tokenize("a\tb\nc\rd").size() == 4);
}

TEST_CASE("zero-width space is not a separator") {
    REQUIRE(tokenize("a​b").size() == 1);
}

TEST_CASE("malformed UTF-8 bytes pass through as word characters") {
    const std::string bad = "ok \xFF\xFE broken";
    const auto seq = tokenize(bad);
    REQUIRE(seq.size() == 3);
    REQUIRE(seq.words()[1] == "\xFF\xFE");
}

TEST_CASE("tokenization round-trips through join") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(0, 40);
    std::uniform_int_distribution<int> word(0, 999);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> words;
        const int n = len(rng);
        for (int i = 0; i < n; ++i)
            words.push_back("tok" + std::to_string(word(rng)) + "!");
        const auto seq = tokenize(join_words(words));
        REQUIRE(seq.words() == words);
    }
}

TEST_CASE("vocab size never exceeds length") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(0, 300);
    std::uniform_int_distribution<int> word(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        std::string text;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            if (i > 0) text += ' ';
            text += "w" + std::to_string(word(rng));
        }
        const auto seq = tokenize(text);
        REQUIRE(seq.size() == static_cast<std::size_t>(n));
        REQUIRE(seq.vocab_size() <= seq.size());
        if (seq.size() == 0) REQUIRE(seq.vocab_size() == 0);
    }
}

TEST_CASE("dense ids number tokens by first appearance") {
    const auto ids = lexdiv::dense_ids({"a", "b", "a", "c", "b"});
    REQUIRE(ids == std::vector<std::uint32_t>{0, 1, 0, 2, 1});
}
