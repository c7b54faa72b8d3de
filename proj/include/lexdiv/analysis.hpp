#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexdiv/corpus.hpp"
#include "lexdiv/errors.hpp"
#include "lexdiv/homogenization.hpp"
#include "lexdiv/metrics.hpp"
#include "lexdiv/stats.hpp"

namespace lexdiv {

struct scored_member {
    std::string id;
    std::size_t length = 0;
    double score = 0.0;
};

// Direction-aware ranking order; ties break by ascending id. The CR empty
// text sentinel (score 0 under lower-is-better) always ranks last.
inline bool ranks_ahead(const scored_member& a, const scored_member& b,
                        bool higher_better) {
    if (higher_better) {
        if (a.score != b.score) return a.score > b.score;
    } else {
        const bool a_sentinel = a.score == 0.0;
        const bool b_sentinel = b.score == 0.0;
        if (a_sentinel != b_sentinel) return b_sentinel;
        if (a.score != b.score) return a.score < b.score;
    }
    return a.id < b.id;
}

struct win_rate_result {
    metric_params params;
    std::optional<double> win_rate_percent;  // empty when no pool was evaluable
    std::size_t wins = 0;
    std::size_t pools_evaluated = 0;
    std::size_t pools_skipped = 0;  // pools with fewer than 2 scored members
};

// A pool scores a win when its top-ranked member's length sits at or below
// the pool's 25th length percentile (linear interpolation).
inline win_rate_result win_rate_over_pools(
    const std::vector<std::vector<scored_member>>& pools,
    const metric_params& params) {
    params.validate();
    const bool higher = higher_is_better(params.id);
    win_rate_result result;
    result.params = params;
    for (const auto& members : pools) {
        if (members.size() < 2) {
            ++result.pools_skipped;
            continue;
        }
        const scored_member* top = &members.front();
        std::vector<double> lengths;
        lengths.reserve(members.size());
        for (const auto& m : members) {
            lengths.push_back(static_cast<double>(m.length));
            if (ranks_ahead(m, *top, higher)) top = &m;
        }
        const double p25 = stats::percentile(std::move(lengths), 25.0);
        if (static_cast<double>(top->length) <= p25) ++result.wins;
        ++result.pools_evaluated;
    }
    if (result.pools_evaluated > 0)
        result.win_rate_percent = 100.0 * static_cast<double>(result.wins) /
                                  static_cast<double>(result.pools_evaluated);
    return result;
}

inline win_rate_result win_rate(const std::vector<text_record>& records,
                                const std::vector<pool>& pools,
                                const metric_params& params) {
    std::unordered_map<std::string_view, const text_record*> by_id;
    by_id.reserve(records.size());
    for (const auto& rec : records) by_id.emplace(rec.id, &rec);
    std::vector<std::vector<scored_member>> scored;
    scored.reserve(pools.size());
    for (const auto& p : pools) {
        std::vector<scored_member> members;
        members.reserve(p.member_ids.size());
        for (const auto& id : p.member_ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end())
                throw data_error("pool member \"" + id + "\" not in corpus");
            const word_sequence seq = tokenize(it->second->text);
            members.push_back({id, seq.size(), score_record(*it->second, seq, params)});
        }
        scored.push_back(std::move(members));
    }
    return win_rate_over_pools(scored, params);
}

// Inclusive word-count bounds.
struct length_constraint {
    std::size_t min_words = 0;
    std::size_t max_words = std::numeric_limits<std::size_t>::max();

    void validate() const {
        if (min_words > max_words)
            throw config_error("length constraint: min exceeds max");
    }
    bool contains(std::size_t length) const {
        return length >= min_words && length <= max_words;
    }
    bool bounded() const {
        return max_words != std::numeric_limits<std::size_t>::max();
    }
};

struct filter_report {
    metric_params params;
    length_constraint constraint;
    std::size_t requested_k = 0;
    std::uint64_t seed = 0;
    std::size_t pairs_max = 0;
    std::vector<std::string> selected_ids;  // ranked, best first
    std::size_t survivor_count = 0;
    bool truncated = false;  // fewer survivors than requested_k
    std::optional<double> mean_selected_length;
    std::optional<homogenization_report> homogenization;
    std::optional<double> ngram_word_4;
    std::optional<double> ngram_word_6;
    std::optional<double> ngram_pos_4;
    std::optional<double> ngram_pos_6;
    std::optional<double> wasserstein;
    std::optional<double> mean_entropy;
};

namespace detail {

// Fills the evaluation half of a filter report from the selected records in
// rank order. Shared by the in-memory pipeline and the streaming CLI path.
inline void evaluate_selection(filter_report& report,
                               const std::vector<const text_record*>& selected,
                               std::uint64_t seed, std::size_t pairs_max) {
    if (selected.empty()) return;
    std::vector<word_sequence> seqs;
    seqs.reserve(selected.size());
    for (const auto* rec : selected) seqs.push_back(tokenize(rec->text));

    double length_sum = 0.0;
    for (const auto& s : seqs) length_sum += static_cast<double>(s.size());
    report.mean_selected_length = length_sum / static_cast<double>(seqs.size());

    if (selected.size() >= 2) {
        std::vector<std::pair<std::string, const word_sequence*>> docs;
        docs.reserve(selected.size());
        for (std::size_t i = 0; i < selected.size(); ++i)
            docs.emplace_back(selected[i]->id, &seqs[i]);
        report.homogenization = score_homogenization(docs, pairs_max, seed);
    }

    // Per-record n-gram diversity, averaged over the selection; the POS
    // variant only when every selected record carries tags.
    const auto mean_ngram = [&](std::size_t order, bool pos) -> std::optional<double> {
        double sum = 0.0;
        for (std::size_t i = 0; i < selected.size(); ++i) {
            if (pos) {
                if (!selected[i]->pos_tags) return std::nullopt;
                sum += ngram_diversity(*selected[i]->pos_tags, order);
            } else {
                sum += ngram_diversity(seqs[i], order);
            }
        }
        return sum / static_cast<double>(selected.size());
    };
    report.ngram_word_4 = mean_ngram(4, false);
    report.ngram_word_6 = mean_ngram(6, false);
    report.ngram_pos_4 = mean_ngram(4, true);
    report.ngram_pos_6 = mean_ngram(6, true);

    std::vector<const word_sequence*> seq_ptrs;
    seq_ptrs.reserve(seqs.size());
    std::size_t total_words = 0;
    for (const auto& s : seqs) {
        seq_ptrs.push_back(&s);
        total_words += s.size();
    }
    if (total_words > 0) report.wasserstein = wasserstein_to_uniform(seq_ptrs);

    const bool all_surprisals =
        std::all_of(selected.begin(), selected.end(), [](const text_record* r) {
            return r->surprisals && !r->surprisals->empty();
        });
    if (all_surprisals) {
        std::vector<text_record> recs;
        recs.reserve(selected.size());
        for (const auto* r : selected) recs.push_back(*r);
        report.mean_entropy = mean_token_entropy(recs);
    }
}

}  // namespace detail

// Assembles a report for an externally ranked selection. Streaming
// front-ends use this to avoid holding the whole corpus in memory.
inline filter_report build_filter_report(
    const metric_params& params, const length_constraint& constraint,
    std::size_t k, std::uint64_t seed, std::size_t pairs_max,
    std::size_t survivor_count,
    const std::vector<const text_record*>& ranked_selection) {
    filter_report report;
    report.params = params;
    report.constraint = constraint;
    report.requested_k = k;
    report.seed = seed;
    report.pairs_max = pairs_max;
    report.survivor_count = survivor_count;
    report.truncated = ranked_selection.size() < k;
    report.selected_ids.reserve(ranked_selection.size());
    for (const auto* rec : ranked_selection) report.selected_ids.push_back(rec->id);
    detail::evaluate_selection(report, ranked_selection, seed, pairs_max);
    return report;
}

// Applies the length constraint, ranks survivors by the metric
// (direction-aware, ties by id), keeps the top k, and evaluates the
// selection: homogenization over a seeded pair sample, mean n-gram
// diversity, and the Wasserstein distance to uniform vocabulary usage.
inline filter_report filter_top_k(const std::vector<text_record>& records,
                                  const metric_params& params, std::size_t k,
                                  const length_constraint& constraint,
                                  std::uint64_t seed,
                                  std::size_t pairs_max = 1000) {
    params.validate();
    constraint.validate();
    if (k < 1) throw config_error("filter: k must be >= 1");

    std::vector<scored_member> survivors;
    std::unordered_map<std::string_view, const text_record*> by_id;
    by_id.reserve(records.size());
    for (const auto& rec : records) {
        by_id.emplace(rec.id, &rec);
        const word_sequence seq = tokenize(rec.text);
        if (!constraint.contains(seq.size())) continue;
        survivors.push_back({rec.id, seq.size(), score_record(rec, seq, params)});
    }
    const std::size_t survivor_count = survivors.size();
    const bool higher = higher_is_better(params.id);
    std::sort(survivors.begin(), survivors.end(),
              [&](const scored_member& a, const scored_member& b) {
                  return ranks_ahead(a, b, higher);
              });
    if (survivors.size() > k) survivors.resize(k);

    std::vector<const text_record*> selected;
    selected.reserve(survivors.size());
    for (const auto& m : survivors) selected.push_back(by_id.at(m.id));
    return build_filter_report(params, constraint, k, seed, pairs_max,
                               survivor_count, selected);
}

// Spearman correlation between metric value and response length.
inline stats::correlation length_correlation(const std::vector<text_record>& records,
                                             const metric_params& params) {
    params.validate();
    if (records.size() < 3)
        throw data_error("length_correlation: need at least 3 records");
    std::vector<double> scores;
    std::vector<double> lengths;
    scores.reserve(records.size());
    lengths.reserve(records.size());
    for (const auto& rec : records) {
        const word_sequence seq = tokenize(rec.text);
        scores.push_back(score_record(rec, seq, params));
        lengths.push_back(static_cast<double>(seq.size()));
    }
    return stats::spearman(scores, lengths);
}

enum class similarity_id { rouge1, rouge2, rougeL, bleu };

inline const char* similarity_name(similarity_id id) {
    switch (id) {
        case similarity_id::rouge1: return "rouge1";
        case similarity_id::rouge2: return "rouge2";
        case similarity_id::rougeL: return "rougeL";
        case similarity_id::bleu: return "bleu";
    }
    return "?";
}

struct ttest_report {
    stats::welch_result welch;
    double mean_length_diff = 0.0;  // selection a minus selection b
    std::size_t pairs_a = 0;
    std::size_t pairs_b = 0;
};

namespace detail {

inline std::vector<double> all_pair_scores(const std::vector<const text_record*>& sel,
                                           similarity_id sim) {
    std::vector<word_sequence> seqs;
    seqs.reserve(sel.size());
    for (const auto* rec : sel) seqs.push_back(tokenize(rec->text));
    std::vector<double> scores;
    scores.reserve(sel.size() * (sel.size() - 1) / 2);
    for (std::size_t i = 0; i + 1 < sel.size(); ++i) {
        for (std::size_t j = i + 1; j < sel.size(); ++j) {
            const bool i_first = sel[i]->id <= sel[j]->id;
            const auto& a = seqs[i_first ? i : j];
            const auto& b = seqs[i_first ? j : i];
            switch (sim) {
                case similarity_id::rouge1: scores.push_back(rouge_n(a, b, 1)); break;
                case similarity_id::rouge2: scores.push_back(rouge_n(a, b, 2)); break;
                case similarity_id::rougeL: scores.push_back(rouge_l(a, b)); break;
                case similarity_id::bleu: scores.push_back(bleu(a, b)); break;
            }
        }
    }
    return scores;
}

inline double mean_word_count(const std::vector<const text_record*>& sel) {
    double sum = 0.0;
    for (const auto* rec : sel) sum += static_cast<double>(tokenize(rec->text).size());
    return sum / static_cast<double>(sel.size());
}

}  // namespace detail

// Welch's t-test between the pairwise similarity scores of two selections,
// computed over every unique pair of each selection. A negative t with
// selection a first means a is the more diverse selection.
inline ttest_report sensitivity_ttest(const std::vector<const text_record*>& selection_a,
                                      const std::vector<const text_record*>& selection_b,
                                      similarity_id sim) {
    if (selection_a.size() < 2 || selection_b.size() < 2)
        throw data_error("sensitivity_ttest: selections need at least 2 members");
    const auto scores_a = detail::all_pair_scores(selection_a, sim);
    const auto scores_b = detail::all_pair_scores(selection_b, sim);
    ttest_report report;
    report.welch = stats::welch_t_test(scores_a, scores_b);
    report.mean_length_diff = detail::mean_word_count(selection_a) -
                              detail::mean_word_count(selection_b);
    report.pairs_a = scores_a.size();
    report.pairs_b = scores_b.size();
    return report;
}

}  // namespace lexdiv
