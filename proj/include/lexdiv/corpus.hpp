#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lexdiv/errors.hpp"
#include "lexdiv/stats.hpp"
#include "lexdiv/tokenize.hpp"

namespace lexdiv {

// One corpus document plus optional experiment coordinates and
// externally supplied annotations.
struct text_record {
    std::string id;
    std::string text;
    std::optional<std::string> model;
    std::optional<int> num_instructions;  // 0..9
    std::optional<std::string> style_id;
    std::optional<std::string> prompt_id;
    std::optional<std::vector<std::string>> pos_tags;
    std::optional<std::vector<double>> surprisals;  // nats per token

    bool has_pool_key() const {
        return model.has_value() && num_instructions.has_value() &&
               prompt_id.has_value();
    }
};

namespace detail {

inline data_error record_error(std::size_t line_no, const std::string& what) {
    return data_error("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

// Parses one JSONL corpus line. line_no is 1-based and used in error messages.
inline text_record parse_record_line(std::string_view line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw detail::record_error(line_no, std::string("parse error: ") + e.what());
    }
    if (!j.is_object()) throw detail::record_error(line_no, "record is not a JSON object");

    text_record rec;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
        throw detail::record_error(line_no, "missing or empty \"id\"");
    rec.id = j["id"].get<std::string>();
    if (!j.contains("text") || !j["text"].is_string())
        throw detail::record_error(line_no, "missing \"text\"");
    rec.text = j["text"].get<std::string>();

    if (j.contains("model")) {
        if (!j["model"].is_string()) throw detail::record_error(line_no, "\"model\" must be a string");
        rec.model = j["model"].get<std::string>();
    }
    if (j.contains("num_instructions")) {
        if (!j["num_instructions"].is_number_integer())
            throw detail::record_error(line_no, "\"num_instructions\" must be an integer");
        const auto k = j["num_instructions"].get<int>();
        if (k < 0 || k > 9)
            throw detail::record_error(line_no, "\"num_instructions\" outside 0..9");
        rec.num_instructions = k;
    }
    if (j.contains("style_id")) {
        if (!j["style_id"].is_string()) throw detail::record_error(line_no, "\"style_id\" must be a string");
        rec.style_id = j["style_id"].get<std::string>();
    }
    if (j.contains("prompt_id")) {
        if (!j["prompt_id"].is_string()) throw detail::record_error(line_no, "\"prompt_id\" must be a string");
        rec.prompt_id = j["prompt_id"].get<std::string>();
    }
    if (j.contains("pos_tags")) {
        if (!j["pos_tags"].is_array())
            throw detail::record_error(line_no, "\"pos_tags\" must be an array of strings");
        std::vector<std::string> tags;
        tags.reserve(j["pos_tags"].size());
        for (const auto& t : j["pos_tags"]) {
            if (!t.is_string())
                throw detail::record_error(line_no, "\"pos_tags\" must be an array of strings");
            tags.push_back(t.get<std::string>());
        }
        // Tags are aligned 1:1 with the canonical tokenization.
        const std::size_t word_count = tokenize(rec.text).size();
        if (tags.size() != word_count)
            throw detail::record_error(
                line_no, "pos_tags length " + std::to_string(tags.size()) +
                             " does not match word count " + std::to_string(word_count));
        rec.pos_tags = std::move(tags);
    }
    if (j.contains("surprisals")) {
        if (!j["surprisals"].is_array())
            throw detail::record_error(line_no, "\"surprisals\" must be an array of numbers");
        std::vector<double> vals;
        vals.reserve(j["surprisals"].size());
        for (const auto& v : j["surprisals"]) {
            if (!v.is_number())
                throw detail::record_error(line_no, "\"surprisals\" must be an array of numbers");
            const double x = v.get<double>();
            if (x < 0.0) throw detail::record_error(line_no, "negative surprisal value");
            vals.push_back(x);
        }
        rec.surprisals = std::move(vals);
    }
    return rec;
}

// Streams a JSONL corpus, invoking fn(record, line_no) per record in file
// order. Duplicate ids are rejected naming both lines.
inline std::size_t for_each_record(
    const std::string& path,
    const std::function<void(text_record&&, std::size_t)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open corpus file: " + path);
    std::unordered_map<std::string, std::size_t> first_line;
    std::string line;
    std::size_t line_no = 0;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        text_record rec = parse_record_line(line, line_no);
        const auto [it, inserted] = first_line.emplace(rec.id, line_no);
        if (!inserted)
            throw data_error("duplicate id \"" + rec.id + "\" at lines " +
                             std::to_string(it->second) + " and " +
                             std::to_string(line_no));
        fn(std::move(rec), line_no);
        ++count;
    }
    return count;
}

inline std::vector<text_record> load_corpus(const std::string& path) {
    std::vector<text_record> records;
    for_each_record(path, [&](text_record&& rec, std::size_t) {
        records.push_back(std::move(rec));
    });
    return records;
}

// Word-count percentiles for a corpus, linear interpolation between closest
// ranks.
inline std::vector<double> length_percentiles(const std::vector<text_record>& corpus,
                                              const std::vector<double>& cuts) {
    if (corpus.empty()) throw data_error("length_percentiles: empty corpus");
    std::vector<double> lengths;
    lengths.reserve(corpus.size());
    for (const auto& rec : corpus)
        lengths.push_back(static_cast<double>(tokenize(rec.text).size()));
    std::vector<double> out;
    out.reserve(cuts.size());
    for (const double cut : cuts) out.push_back(stats::percentile(lengths, cut));
    return out;
}

// Records compared head-to-head: same model, instruction count, and prompt,
// differing only in style.
struct pool {
    std::string model;
    int num_instructions = 0;
    std::string prompt_id;
    std::vector<std::string> member_ids;
};

struct pool_build_result {
    std::vector<pool> pools;          // groups with >= 2 members, sorted by key
    std::size_t skipped_records = 0;  // records missing part of the pool key
    std::size_t singleton_groups = 0; // keys with a single member, not analyzable
};

inline pool_build_result build_pools(const std::vector<text_record>& corpus) {
    using key = std::tuple<std::string, int, std::string>;
    std::map<key, std::vector<std::string>> groups;
    pool_build_result result;
    for (const auto& rec : corpus) {
        if (!rec.has_pool_key()) {
            ++result.skipped_records;
            continue;
        }
        groups[{*rec.model, *rec.num_instructions, *rec.prompt_id}].push_back(rec.id);
    }
    for (auto& [k, ids] : groups) {
        if (ids.size() < 2) {
            ++result.singleton_groups;
            continue;
        }
        result.pools.push_back(
            {std::get<0>(k), std::get<1>(k), std::get<2>(k), std::move(ids)});
    }
    return result;
}

}  // namespace lexdiv
