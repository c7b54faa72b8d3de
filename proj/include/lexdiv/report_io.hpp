#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include <json.hpp>

#include "lexdiv/analysis.hpp"
#include "lexdiv/version.hpp"

namespace lexdiv {

// Shortest round-trip decimal form; keeps serialized reports byte-stable.
inline std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (const char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

// Methodological choices echoed into every report so results are
// reproducible from the report alone.
inline nlohmann::json methods_metadata() {
    return {{"rouge", "f1"},
            {"bleu", "sentence_level_orders_1_4_eps_smoothed"},
            {"pair_order", "min_id_is_bleu_candidate"},
            {"percentile", "linear_interpolation_closest_ranks"},
            {"wasserstein", "rank_cdf_abs_diff_vs_each_word_once"},
            {"entropy", "mean_of_record_means"},
            {"tie_break", "ascending_record_id"}};
}

inline nlohmann::json to_json(const homogenization_report& report) {
    return {{"rouge1", report.rouge1}, {"rouge2", report.rouge2},
            {"rougeL", report.rougeL}, {"bleu", report.bleu},
            {"pairs", report.pairs},   {"seed", report.seed}};
}

inline nlohmann::json to_json(const length_constraint& constraint) {
    nlohmann::json j{{"min", constraint.min_words}};
    if (constraint.bounded()) j["max"] = constraint.max_words;
    else j["max"] = nullptr;
    return j;
}

inline nlohmann::json to_json(const stats::correlation& corr) {
    return {{"rho", corr.rho}, {"p", corr.p_value}, {"n", corr.n}};
}

inline nlohmann::json to_json(const stats::welch_result& w) {
    return {{"t", w.t},           {"p", w.p_value},     {"df", w.df},
            {"mean_a", w.mean_a}, {"mean_b", w.mean_b}, {"n_a", w.n_a},
            {"n_b", w.n_b}};
}

inline nlohmann::json to_json(const filter_report& report) {
    nlohmann::json j;
    j["metric"] = report.params.header();
    j["constraint"] = to_json(report.constraint);
    j["requested_k"] = report.requested_k;
    j["seed"] = report.seed;
    j["pairs_max"] = report.pairs_max;
    j["survivors"] = report.survivor_count;
    j["selected"] = report.selected_ids;
    j["selected_count"] = report.selected_ids.size();
    j["truncated"] = report.truncated;
    const auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    j["mean_selected_length"] = opt(report.mean_selected_length);
    j["homogenization"] = report.homogenization
                              ? to_json(*report.homogenization)
                              : nlohmann::json(nullptr);
    j["ngram_diversity"] = {{"word_4", opt(report.ngram_word_4)},
                            {"word_6", opt(report.ngram_word_6)},
                            {"pos_4", opt(report.ngram_pos_4)},
                            {"pos_6", opt(report.ngram_pos_6)}};
    j["wasserstein"] = opt(report.wasserstein);
    j["mean_token_entropy"] = opt(report.mean_entropy);
    return j;
}

inline nlohmann::json to_json(const win_rate_result& result) {
    nlohmann::json j;
    j["metric"] = result.params.header();
    j["win_rate_percent"] = result.win_rate_percent
                                ? nlohmann::json(*result.win_rate_percent)
                                : nlohmann::json(nullptr);
    j["wins"] = result.wins;
    j["pools_evaluated"] = result.pools_evaluated;
    j["pools_skipped"] = result.pools_skipped;
    return j;
}

inline nlohmann::json to_json(const ttest_report& report) {
    nlohmann::json j = to_json(report.welch);
    j["mean_length_diff"] = report.mean_length_diff;
    j["pairs_a"] = report.pairs_a;
    j["pairs_b"] = report.pairs_b;
    return j;
}

// Flat row layout shared by the filter CSV output: one row per
// metric x constraint x k run.
inline std::string filter_csv_header() {
    return "metric,min_len,max_len,k,selected,survivors,truncated,"
           "mean_selected_length,rouge1,rouge2,rougeL,bleu,pairs,"
           "ngram_word_4,ngram_word_6,ngram_pos_4,ngram_pos_6,"
           "wasserstein,mean_token_entropy,seed";
}

inline std::string filter_csv_row(const filter_report& report) {
    const auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string("NA");
    };
    std::string row = csv_field(report.params.header());
    row += ',' + std::to_string(report.constraint.min_words);
    row += ',' + (report.constraint.bounded()
                      ? std::to_string(report.constraint.max_words)
                      : std::string("NA"));
    row += ',' + std::to_string(report.requested_k);
    row += ',' + std::to_string(report.selected_ids.size());
    row += ',' + std::to_string(report.survivor_count);
    row += ',' + std::string(report.truncated ? "true" : "false");
    row += ',' + opt(report.mean_selected_length);
    if (report.homogenization) {
        row += ',' + format_double(report.homogenization->rouge1);
        row += ',' + format_double(report.homogenization->rouge2);
        row += ',' + format_double(report.homogenization->rougeL);
        row += ',' + format_double(report.homogenization->bleu);
        row += ',' + std::to_string(report.homogenization->pairs);
    } else {
        row += ",NA,NA,NA,NA,0";
    }
    row += ',' + opt(report.ngram_word_4);
    row += ',' + opt(report.ngram_word_6);
    row += ',' + opt(report.ngram_pos_4);
    row += ',' + opt(report.ngram_pos_6);
    row += ',' + opt(report.wasserstein);
    row += ',' + opt(report.mean_entropy);
    row += ',' + std::to_string(report.seed);
    return row;
}

}  // namespace lexdiv
