#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "lexdiv/errors.hpp"
#include "lexdiv/promptgen.hpp"

using lexdiv::compose;
using lexdiv::generate_matrix;
using lexdiv::instruction_block;
using lexdiv::prompt_spec;
using lexdiv::style_selection;

namespace {

std::string data_dir() {
    const char* env = std::getenv("LEXDIV_DATA_DIR");
    return env && *env ? env : "data";
}

const prompt_spec& shipped_spec() {
    static const prompt_spec spec = prompt_spec::load(data_dir() + "/promptspec.json");
    return spec;
}

constexpr const char* kSourdoughTopic =
    "Explain the process of making sourdough bread at home from scratch.";

}  // namespace

TEST_CASE("shipped prompt spec satisfies the matrix invariants") {
    const auto& spec = shipped_spec();
    REQUIRE(spec.instructions.size() == 9);
    for (const auto& category : spec.styles) REQUIRE(category.size() == 5);
}

TEST_CASE("compose with zero instructions is the task description alone") {
    const auto input = compose(shipped_spec(), 0,
                               {"Teenagers", "Funny", "Reel"}, "Topic text");
    REQUIRE(input.system_text ==
            "Task Description: " + shipped_spec().task_description);
    REQUIRE(input.num_instructions == 0);
    REQUIRE(input.system_text.find("formatting rules") == std::string::npos);
}

TEST_CASE("compose with all nine instructions keeps their order") {
    const auto input = compose(shipped_spec(), 9,
                               {"Elderly", "Calm", "Interview"}, "Topic text");
    std::size_t last = 0;
    for (std::size_t i = 1; i <= 9; ++i) {
        const std::string marker = " " + std::to_string(i) + ". ";
        const auto at = input.system_text.find(marker);
        REQUIRE(at != std::string::npos);
        REQUIRE(at > last);
        last = at;
    }
}

TEST_CASE("worked two-instruction example reproduces byte-for-byte") {
    const auto input = compose(
        shipped_spec(), 2, {"General Audience", "Romantic", "Product Showcase"},
        kSourdoughTopic);

    const std::string expected_system =
        "Task Description: You are a conversational assistant specializing in "
        "creating engaging and innovative video scripts for short videos (less "
        "than a minute long). Your task is to generate video scripts based on "
        "user-provided prompts and stylistic preferences. You will receive a "
        "prompt from the user describing the main topic of the video, along "
        "with stylistic features that reflect the user's preferences. Your "
        "goal is to write a creative and engaging script for a short-video "
        "that aligns with both the user's topic and stylistic requirements."
        "\n\n"
        "While generating the video script please strictly adhere to following "
        "formatting rules: 1. Start the video script with [video-script-start] "
        "and after the last scene end with [video-script-end]. 2. The video "
        "script should be written in scene-by-scene format like [scene-1]: "
        "..., [scene-2]: .... etc.";
    const std::string expected_user =
        "Stylistic Features: Audience: General Audience, Mood: Romantic, "
        "Video Type: Product Showcase"
        "\n\n"
        "User Prompt: Explain the process of making sourdough bread at home "
        "from scratch.";

    REQUIRE(input.system_text == expected_system);
    REQUIRE(input.user_text == expected_user);
    REQUIRE(input.style_id == "a4-m3-v3");
    REQUIRE(input.num_instructions == 2);
}

TEST_CASE("instruction blocks satisfy the prefix property") {
    const auto& spec = shipped_spec();
    for (std::size_t k = 0; k + 1 <= 9; ++k) {
        const std::string shorter = instruction_block(spec, k);
        const std::string longer = instruction_block(spec, k + 1);
        REQUIRE(longer.substr(0, shorter.size()) == shorter);
        REQUIRE(longer.size() > shorter.size());
    }
}

TEST_CASE("compose rejects bad input") {
    REQUIRE_THROWS_AS(compose(shipped_spec(), 10, {"Teenagers", "Funny", "Reel"}, "t"),
                      lexdiv::config_error);
    REQUIRE_THROWS_AS(compose(shipped_spec(), 1, {"Nobody", "Funny", "Reel"}, "t"),
                      lexdiv::config_error);
    REQUIRE_THROWS_AS(compose(shipped_spec(), 1, {"Teenagers", "Funny", "Podcast"}, "t"),
                      lexdiv::config_error);
}

TEST_CASE("matrix generation crosses topics, instruction counts, and styles") {
    std::vector<std::string> topics{"first topic", "second topic", "third topic"};
    const auto matrix = generate_matrix(shipped_spec(), topics, 4, 11);
    REQUIRE(matrix.size() == 3 * 10 * 4);

    std::set<std::tuple<std::string, int, std::string>> combos;
    for (const auto& input : matrix)
        combos.insert({input.prompt_id, input.num_instructions, input.style_id});
    REQUIRE(combos.size() == matrix.size());

    // style triples are distinct within each topic
    std::set<std::string> topic0_styles;
    for (const auto& input : matrix)
        if (input.prompt_id == "t000" && input.num_instructions == 0)
            topic0_styles.insert(input.style_id);
    REQUIRE(topic0_styles.size() == 4);
}

TEST_CASE("single-cell matrix varies only the instruction count") {
    const auto matrix = generate_matrix(shipped_spec(), {"just one"}, 1, 5);
    REQUIRE(matrix.size() == 10);
    for (int k = 0; k < 10; ++k) {
        REQUIRE(matrix[k].num_instructions == k);
        REQUIRE(matrix[k].style_id == matrix[0].style_id);
        REQUIRE(matrix[k].user_text == matrix[0].user_text);
    }
}

TEST_CASE("matrix generation is deterministic per seed") {
    std::vector<std::string> topics{"alpha", "beta"};
    const auto a = generate_matrix(shipped_spec(), topics, 5, 77);
    const auto b = generate_matrix(shipped_spec(), topics, 5, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].style_id == b[i].style_id);
        REQUIRE(a[i].system_text == b[i].system_text);
        REQUIRE(a[i].user_text == b[i].user_text);
    }
    const auto c = generate_matrix(shipped_spec(), topics, 5, 78);
    bool any_difference = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].style_id != c[i].style_id) any_difference = true;
    REQUIRE(any_difference);
}

TEST_CASE("matrix generation rejects an oversized style request") {
    REQUIRE_THROWS_AS(generate_matrix(shipped_spec(), {"t"}, 126, 0),
                      lexdiv::config_error);
    REQUIRE_NOTHROW(generate_matrix(shipped_spec(), {"t"}, 125, 0));
}
