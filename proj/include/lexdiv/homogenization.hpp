#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexdiv/corpus.hpp"
#include "lexdiv/errors.hpp"
#include "lexdiv/tokenize.hpp"

namespace lexdiv {

namespace detail {

// Shared dense id space across two token lists, so n-grams from both sides
// compare by id.
struct paired_ids {
    std::vector<std::uint32_t> a;
    std::vector<std::uint32_t> b;
};

inline paired_ids dense_ids_pair(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
    paired_ids out;
    out.a.reserve(a.size());
    out.b.reserve(b.size());
    std::unordered_map<std::string_view, std::uint32_t> table;
    table.reserve(a.size() + b.size());
    const auto intern = [&](const std::string& tok) {
        const auto [it, inserted] =
            table.emplace(tok, static_cast<std::uint32_t>(table.size()));
        return it->second;
    };
    for (const auto& tok : a) out.a.push_back(intern(tok));
    for (const auto& tok : b) out.b.push_back(intern(tok));
    return out;
}

inline std::unordered_map<std::string, std::uint32_t> ngram_counts(
    const std::vector<std::uint32_t>& ids, std::size_t order) {
    std::unordered_map<std::string, std::uint32_t> counts;
    if (ids.size() < order) return counts;
    const std::size_t total = ids.size() - order + 1;
    counts.reserve(total);
    std::string key;
    for (std::size_t i = 0; i < total; ++i) {
        key.assign(reinterpret_cast<const char*>(ids.data() + i),
                   order * sizeof(std::uint32_t));
        ++counts[key];
    }
    return counts;
}

}  // namespace detail

// F1 over n-gram multiset overlap. Symmetric; 0 when either side has no
// n-grams of the given order.
inline double rouge_n(const word_sequence& a, const word_sequence& b,
                      std::size_t order) {
    if (order < 1) throw config_error("rouge_n: order must be >= 1");
    if (a.size() < order || b.size() < order) return 0.0;
    const auto ids = detail::dense_ids_pair(a.words(), b.words());
    const auto counts_a = detail::ngram_counts(ids.a, order);
    const auto counts_b = detail::ngram_counts(ids.b, order);
    std::uint64_t overlap = 0;
    for (const auto& [key, ca] : counts_a) {
        const auto it = counts_b.find(key);
        if (it != counts_b.end()) overlap += std::min(ca, it->second);
    }
    const double total_a = static_cast<double>(a.size() - order + 1);
    const double total_b = static_cast<double>(b.size() - order + 1);
    const double precision = static_cast<double>(overlap) / total_a;
    const double recall = static_cast<double>(overlap) / total_b;
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

// F1 from the word-level longest common subsequence.
inline double rouge_l(const word_sequence& a, const word_sequence& b) {
    if (a.empty() || b.empty()) return 0.0;
    const auto ids = detail::dense_ids_pair(a.words(), b.words());
    // Two-row LCS table; keep the shorter side as the row.
    const auto& rows = ids.a.size() <= ids.b.size() ? ids.a : ids.b;
    const auto& cols = ids.a.size() <= ids.b.size() ? ids.b : ids.a;
    std::vector<std::uint32_t> prev(rows.size() + 1, 0);
    std::vector<std::uint32_t> cur(rows.size() + 1, 0);
    for (std::size_t j = 1; j <= cols.size(); ++j) {
        for (std::size_t i = 1; i <= rows.size(); ++i) {
            cur[i] = rows[i - 1] == cols[j - 1]
                         ? prev[i - 1] + 1
                         : std::max(prev[i], cur[i - 1]);
        }
        std::swap(prev, cur);
    }
    const double lcs = static_cast<double>(prev[rows.size()]);
    const double precision = lcs / static_cast<double>(a.size());
    const double recall = lcs / static_cast<double>(b.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

// Sentence-level BLEU: clipped modified precision over orders 1..4 (orders
// beyond the candidate length are dropped), uniform weights, add-epsilon
// smoothing of zero precisions, and brevity penalty exp(1 - |ref|/|cand|)
// for short candidates.
inline double bleu(const word_sequence& candidate, const word_sequence& reference) {
    constexpr double kEpsilon = 1e-9;
    const std::size_t c = candidate.size();
    const std::size_t r = reference.size();
    if (c == 0) return 0.0;
    const auto ids = detail::dense_ids_pair(candidate.words(), reference.words());
    double log_sum = 0.0;
    std::size_t orders_used = 0;
    for (std::size_t n = 1; n <= 4 && n <= c; ++n) {
        const auto cand_counts = detail::ngram_counts(ids.a, n);
        const auto ref_counts = detail::ngram_counts(ids.b, n);
        std::uint64_t clipped = 0;
        for (const auto& [key, count] : cand_counts) {
            const auto it = ref_counts.find(key);
            if (it != ref_counts.end()) clipped += std::min(count, it->second);
        }
        const double total = static_cast<double>(c - n + 1);
        double p = static_cast<double>(clipped) / total;
        if (p <= 0.0) p = kEpsilon;
        log_sum += std::log(p);
        ++orders_used;
    }
    const double geo_mean = std::exp(log_sum / static_cast<double>(orders_used));
    const double brevity =
        c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
    return brevity * geo_mean;
}

// An unordered record pair, canonicalized so first < second by id.
struct id_pair {
    std::string first;
    std::string second;
};

struct pair_sample {
    std::uint64_t seed = 0;
    std::size_t max_pairs = 0;
    std::vector<std::pair<std::size_t, std::size_t>> index_pairs;  // i < j
};

namespace detail {

// Maps a flat index in [0, k*(k-1)/2) to the pair (i, j), i < j, enumerated
// row-major: (0,1), (0,2), ..., (1,2), ...
inline std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t idx,
                                                       std::uint64_t k) {
    const auto row_offset = [&](std::uint64_t i) {
        return i * k - i * (i + 1) / 2;
    };
    const double kd = static_cast<double>(k);
    auto i = static_cast<std::uint64_t>(
        std::floor(kd - 0.5 - std::sqrt((kd - 0.5) * (kd - 0.5) -
                                        2.0 * static_cast<double>(idx))));
    while (i > 0 && row_offset(i) > idx) --i;
    while (i + 1 < k && row_offset(i + 1) <= idx) ++i;
    const std::uint64_t j = i + 1 + (idx - row_offset(i));
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

}  // namespace detail

// Uniform sample without replacement of unordered index pairs. Deterministic
// for a fixed seed; returns every pair when the cap covers them all.
inline pair_sample sample_pairs(std::size_t count, std::size_t max_pairs,
                                std::uint64_t seed) {
    if (max_pairs < 1) throw config_error("sample_pairs: cap must be >= 1");
    if (count < 2) throw data_error("sample_pairs: need at least 2 ids");
    const auto k = static_cast<std::uint64_t>(count);
    const std::uint64_t total = k * (k - 1) / 2;
    pair_sample sample;
    sample.seed = seed;
    sample.max_pairs = max_pairs;
    if (total <= max_pairs) {
        sample.index_pairs.reserve(total);
        for (std::size_t i = 0; i + 1 < count; ++i)
            for (std::size_t j = i + 1; j < count; ++j)
                sample.index_pairs.emplace_back(i, j);
        return sample;
    }
    // Floyd's sampling: exactly max_pairs distinct flat indices.
    std::mt19937_64 rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(max_pairs * 2);
    for (std::uint64_t j = total - max_pairs; j < total; ++j) {
        const std::uint64_t t =
            std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> flat(chosen.begin(), chosen.end());
    std::sort(flat.begin(), flat.end());
    sample.index_pairs.reserve(flat.size());
    for (const std::uint64_t idx : flat)
        sample.index_pairs.push_back(detail::unrank_pair(idx, k));
    return sample;
}

inline std::vector<id_pair> sample_id_pairs(const std::vector<std::string>& ids,
                                            std::size_t max_pairs,
                                            std::uint64_t seed) {
    const pair_sample sample = sample_pairs(ids.size(), max_pairs, seed);
    std::vector<id_pair> out;
    out.reserve(sample.index_pairs.size());
    for (const auto& [i, j] : sample.index_pairs) {
        const auto& a = ids[i];
        const auto& b = ids[j];
        out.push_back(a <= b ? id_pair{a, b} : id_pair{b, a});
    }
    return out;
}

// Mean pairwise similarity over a seeded pair sample. Lower means a more
// diverse corpus.
struct homogenization_report {
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
    double bleu = 0.0;
    std::size_t pairs = 0;
    std::uint64_t seed = 0;
};

// docs supply (id, tokenized text) in caller order; each sampled pair is
// scored once with the lexicographically smaller id as the BLEU candidate.
inline homogenization_report score_homogenization(
    const std::vector<std::pair<std::string, const word_sequence*>>& docs,
    std::size_t max_pairs, std::uint64_t seed) {
    const pair_sample sample = sample_pairs(docs.size(), max_pairs, seed);
    homogenization_report report;
    report.pairs = sample.index_pairs.size();
    report.seed = seed;
    for (const auto& [i, j] : sample.index_pairs) {
        const bool i_first = docs[i].first <= docs[j].first;
        const auto& cand = *docs[i_first ? i : j].second;
        const auto& ref = *docs[i_first ? j : i].second;
        report.rouge1 += rouge_n(cand, ref, 1);
        report.rouge2 += rouge_n(cand, ref, 2);
        report.rougeL += rouge_l(cand, ref);
        report.bleu += bleu(cand, ref);
    }
    const auto n = static_cast<double>(report.pairs);
    report.rouge1 /= n;
    report.rouge2 /= n;
    report.rougeL /= n;
    report.bleu /= n;
    return report;
}

// Distance between the corpus rank-frequency CDF and the uniform reference
// in which each pooled word appears exactly once: sum over vocabulary ranks
// of |CDF_emp(i) - CDF_uniform(i)|. 0 means maximally even vocabulary usage.
inline double wasserstein_to_uniform(
    const std::vector<const word_sequence*>& corpus) {
    std::unordered_map<std::string_view, std::uint64_t> freq;
    std::uint64_t total = 0;
    for (const auto* seq : corpus) {
        for (const auto& w : seq->words()) {
            ++freq[w];
            ++total;
        }
    }
    if (total == 0) throw data_error("wasserstein: empty corpus");
    std::vector<std::uint64_t> counts;
    counts.reserve(freq.size());
    for (const auto& [w, c] : freq) counts.push_back(c);
    std::sort(counts.begin(), counts.end(), std::greater<>());
    const auto vocab = static_cast<double>(counts.size());
    const auto t = static_cast<double>(total);
    double cumulative = 0.0;
    double distance = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        cumulative += static_cast<double>(counts[i]);
        distance += std::fabs(cumulative / t -
                              static_cast<double>(i + 1) / vocab);
    }
    return distance;
}

// Mean over records of the record's mean per-token surprisal. Higher means
// more diverse. The surprisal values themselves are supplied externally.
inline double mean_token_entropy(const std::vector<text_record>& records) {
    if (records.empty()) throw data_error("mean_token_entropy: empty corpus");
    double sum = 0.0;
    for (const auto& rec : records) {
        if (!rec.surprisals || rec.surprisals->empty())
            throw data_error("record \"" + rec.id + "\" has no surprisals");
        double rec_sum = 0.0;
        for (const double s : *rec.surprisals) rec_sum += s;
        sum += rec_sum / static_cast<double>(rec.surprisals->size());
    }
    return sum / static_cast<double>(records.size());
}

}  // namespace lexdiv
