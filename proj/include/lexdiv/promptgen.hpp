#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexdiv/errors.hpp"

namespace lexdiv {

inline constexpr std::size_t kStyleCategories = 3;
inline constexpr std::size_t kStyleValuesPerCategory = 5;
inline constexpr std::size_t kInstructionCount = 9;
inline constexpr std::size_t kStyleTripleCount = 125;  // 5 * 5 * 5

inline constexpr const char* kInstructionPreamble =
    "While generating the video script please strictly adhere to following "
    "formatting rules:";

inline constexpr std::array<const char*, kStyleCategories> kStyleCategoryNames = {
    "Audience", "Mood", "Video Type"};

// The structured prompt matrix: a fixed task description, nine formatting
// instructions applied as first-k prefixes, and three style categories of
// five values each. Loaded from a JSON spec file.
struct prompt_spec {
    std::string task_description;
    std::vector<std::string> instructions;  // exactly 9, order is load-bearing
    std::array<std::vector<std::string>, kStyleCategories> styles;  // audience, mood, video type

    void validate() const {
        if (task_description.empty())
            throw data_error("prompt spec: empty taskDescription");
        if (instructions.size() != kInstructionCount)
            throw data_error("prompt spec: expected " +
                             std::to_string(kInstructionCount) + " instructions, got " +
                             std::to_string(instructions.size()));
        for (const auto& category : styles)
            if (category.size() != kStyleValuesPerCategory)
                throw data_error("prompt spec: every style category needs exactly " +
                                 std::to_string(kStyleValuesPerCategory) + " values");
    }

    static prompt_spec load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw data_error("cannot open prompt spec file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw data_error("prompt spec parse error: " + std::string(e.what()));
        }
        prompt_spec spec;
        try {
            spec.task_description = j.at("taskDescription").get<std::string>();
            spec.instructions = j.at("instructions").get<std::vector<std::string>>();
            const auto& styles = j.at("styles");
            spec.styles[0] = styles.at("audience").get<std::vector<std::string>>();
            spec.styles[1] = styles.at("mood").get<std::vector<std::string>>();
            spec.styles[2] = styles.at("videoType").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw data_error("prompt spec: " + std::string(e.what()));
        }
        spec.validate();
        return spec;
    }
};

// One value per style category, by name.
struct style_selection {
    std::string audience;
    std::string mood;
    std::string video_type;
};

struct composed_input {
    std::string prompt_id;
    int num_instructions = 0;
    std::string style_id;
    std::string system_text;
    std::string user_text;
};

// The numbered instruction block for the first k instructions; empty for
// k = 0. Block k is a string prefix of block k+1.
inline std::string instruction_block(const prompt_spec& spec, std::size_t k) {
    if (k > spec.instructions.size())
        throw config_error("compose: instruction count outside 0.." +
                           std::to_string(spec.instructions.size()));
    if (k == 0) return {};
    std::string block = kInstructionPreamble;
    for (std::size_t i = 0; i < k; ++i) {
        block += ' ';
        block += std::to_string(i + 1);
        block += ". ";
        block += spec.instructions[i];
    }
    return block;
}

namespace detail {

inline std::size_t style_index(const std::vector<std::string>& values,
                               const std::string& value, const char* category) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == value) return i;
    throw config_error(std::string("compose: unknown ") + category + " style value \"" +
                       value + "\"");
}

}  // namespace detail

// Deterministic assembly of one model input. The task description and the
// instruction prefix form the system text; the style line and the topic form
// the user text.
inline composed_input compose(const prompt_spec& spec, std::size_t k,
                              const style_selection& style, const std::string& topic,
                              std::string prompt_id = {}) {
    spec.validate();
    const std::size_t ai = detail::style_index(spec.styles[0], style.audience,
                                               kStyleCategoryNames[0]);
    const std::size_t mi = detail::style_index(spec.styles[1], style.mood,
                                               kStyleCategoryNames[1]);
    const std::size_t vi = detail::style_index(spec.styles[2], style.video_type,
                                               kStyleCategoryNames[2]);
    composed_input out;
    out.prompt_id = std::move(prompt_id);
    out.num_instructions = static_cast<int>(k);
    out.style_id = "a" + std::to_string(ai) + "-m" + std::to_string(mi) + "-v" +
                   std::to_string(vi);
    out.system_text = "Task Description: " + spec.task_description;
    if (k >= 1) {
        out.system_text += "\n\n";
        out.system_text += instruction_block(spec, k);
    }
    out.user_text = std::string(kStyleCategoryNames[0]) + ": " + style.audience +
                    ", " + kStyleCategoryNames[1] + ": " + style.mood + ", " +
                    kStyleCategoryNames[2] + ": " + style.video_type;
    out.user_text = "Stylistic Features: " + out.user_text + "\n\nUser Prompt: " + topic;
    return out;
}

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 over seed + stream; decorrelates per-topic generators.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline style_selection triple_from_index(const prompt_spec& spec, std::size_t idx) {
    return {spec.styles[0][idx / 25], spec.styles[1][(idx / 5) % 5],
            spec.styles[2][idx % 5]};
}

}  // namespace detail

// Emits |topics| * 10 * styles_per_topic inputs with stable ids: for each
// topic, styles_per_topic distinct style triples sampled without replacement
// from the 125-triple space, crossed with instruction counts 0..9.
inline std::vector<composed_input> generate_matrix(const prompt_spec& spec,
                                                   const std::vector<std::string>& topics,
                                                   std::size_t styles_per_topic,
                                                   std::uint64_t seed) {
    spec.validate();
    if (styles_per_topic < 1 || styles_per_topic > kStyleTripleCount)
        throw config_error("generate_matrix: styles_per_topic outside 1.." +
                           std::to_string(kStyleTripleCount));
    std::vector<composed_input> out;
    out.reserve(topics.size() * (kInstructionCount + 1) * styles_per_topic);
    for (std::size_t t = 0; t < topics.size(); ++t) {
        std::mt19937_64 rng(detail::mix_seed(seed, t));
        std::vector<std::size_t> triples(kStyleTripleCount);
        std::iota(triples.begin(), triples.end(), std::size_t{0});
        for (std::size_t i = 0; i < styles_per_topic; ++i) {
            const std::size_t j = std::uniform_int_distribution<std::size_t>(
                i, kStyleTripleCount - 1)(rng);
            std::swap(triples[i], triples[j]);
        }
        std::ostringstream topic_id;
        topic_id << 't' << std::setw(3) << std::setfill('0') << t;
        for (std::size_t k = 0; k <= kInstructionCount; ++k) {
            for (std::size_t s = 0; s < styles_per_topic; ++s) {
                const auto style = detail::triple_from_index(spec, triples[s]);
                out.push_back(compose(spec, k, style, topics[t], topic_id.str()));
            }
        }
    }
    return out;
}

}  // namespace lexdiv
