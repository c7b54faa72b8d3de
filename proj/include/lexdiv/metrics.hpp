#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include <zlib.h>

#include "lexdiv/corpus.hpp"
#include "lexdiv/errors.hpp"
#include "lexdiv/tokenize.hpp"

namespace lexdiv {

enum class metric_id { ttr, pattr, mattr, cr, ngram };

enum class ngram_source { words, pos };

inline const char* metric_name(metric_id id) {
    switch (id) {
        case metric_id::ttr: return "TTR";
        case metric_id::pattr: return "PATTR";
        case metric_id::mattr: return "MATTR";
        case metric_id::cr: return "CR";
        case metric_id::ngram: return "NGRAM";
    }
    return "?";
}

// CR is the only lower-is-better metric; keeping the direction explicit
// prevents silent ranking inversions.
inline bool higher_is_better(metric_id id) { return id != metric_id::cr; }

struct metric_params {
    metric_id id = metric_id::ttr;
    std::size_t target_length = 0;   // PATTR: target length L_T in words
    std::size_t window = 0;          // MATTR: window length in words
    std::size_t trunc = 0;           // CR: truncation length in words
    int compression_level = 9;       // CR
    std::size_t max_order = 0;       // NGRAM: maximum n-gram order
    ngram_source source = ngram_source::words;

    static metric_params make_ttr() { return {metric_id::ttr}; }
    static metric_params make_pattr(std::size_t lt) {
        metric_params p{metric_id::pattr};
        p.target_length = lt;
        return p;
    }
    static metric_params make_mattr(std::size_t w) {
        metric_params p{metric_id::mattr};
        p.window = w;
        return p;
    }
    static metric_params make_cr(std::size_t trunc, int level = 9) {
        metric_params p{metric_id::cr};
        p.trunc = trunc;
        p.compression_level = level;
        return p;
    }
    static metric_params make_ngram(std::size_t n,
                                    ngram_source src = ngram_source::words) {
        metric_params p{metric_id::ngram};
        p.max_order = n;
        p.source = src;
        return p;
    }

    void validate() const {
        switch (id) {
            case metric_id::ttr:
                break;
            case metric_id::pattr:
                if (target_length < 1)
                    throw config_error("PATTR: target length must be >= 1");
                break;
            case metric_id::mattr:
                if (window < 1) throw config_error("MATTR: window must be >= 1");
                break;
            case metric_id::cr:
                if (trunc < 1)
                    throw config_error("CR: truncation length must be >= 1");
                if (compression_level < 1 || compression_level > 9)
                    throw config_error("CR: compression level must be in 1..9");
                break;
            case metric_id::ngram:
                if (max_order < 1)
                    throw config_error("NGRAM: max order must be >= 1");
                break;
        }
    }

    // Report-header form, e.g. "metric=PATTR;L_T=400".
    std::string header() const {
        std::string h = std::string("metric=") + metric_name(id);
        switch (id) {
            case metric_id::ttr:
                break;
            case metric_id::pattr:
                h += ";L_T=" + std::to_string(target_length);
                break;
            case metric_id::mattr:
                h += ";W=" + std::to_string(window);
                break;
            case metric_id::cr:
                h += ";L=" + std::to_string(trunc) +
                     ";level=" + std::to_string(compression_level);
                break;
            case metric_id::ngram:
                h += ";N=" + std::to_string(max_order) +
                     ";tokens=" + (source == ngram_source::pos ? "pos" : "word");
                break;
        }
        return h;
    }
};

// A named metric value attached to a record.
struct diversity_score {
    std::string record_id;
    metric_params params;
    double value = 0.0;
};

// Unique words over total words; 0 for empty text.
inline double ttr(const word_sequence& seq) {
    if (seq.empty()) return 0.0;
    return static_cast<double>(seq.vocab_size()) / static_cast<double>(seq.size());
}

// Absolute deviation of the text length from the target length, in words.
// The penalty applies to both shorter and longer texts.
inline std::size_t penalty(std::size_t length, std::size_t target_length) {
    if (target_length < 1) throw config_error("penalty: target length must be >= 1");
    return length > target_length ? length - target_length : target_length - length;
}

// Penalty-adjusted TTR: the length deviation inflates the denominator, so
// the score decreases as the text drifts from the target length. Equals
// plain TTR when the text is exactly target_length words.
inline double pattr(const word_sequence& seq, std::size_t target_length) {
    const std::size_t pen = penalty(seq.size(), target_length);
    if (seq.empty()) return 0.0;
    return static_cast<double>(seq.vocab_size()) /
           static_cast<double>(seq.size() + pen);
}

// Moving-average TTR: mean TTR over all contiguous windows of exactly
// `window` words, step 1. Texts no longer than the window fall back to
// plain TTR. Incremental: one pass, O(length) updates.
inline double mattr(const word_sequence& seq, std::size_t window) {
    if (window < 1) throw config_error("MATTR: window must be >= 1");
    const std::size_t n = seq.size();
    if (n == 0) return 0.0;
    if (n <= window) return ttr(seq);
    const auto ids = dense_ids(seq.words());
    std::vector<std::uint32_t> counts(seq.vocab_size(), 0);
    std::size_t distinct = 0;
    std::uint64_t distinct_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[ids[i]]++ == 0) ++distinct;
        if (i >= window && --counts[ids[i - window]] == 0) --distinct;
        if (i + 1 >= window) distinct_sum += distinct;
    }
    const std::size_t num_windows = n - window + 1;
    return static_cast<double>(distinct_sum) /
           (static_cast<double>(window) * static_cast<double>(num_windows));
}

// Compression ratio of the first min(L, trunc) words: uncompressed bytes
// over DEFLATE-compressed bytes (zlib, headers included). Lower means more
// diverse. Empty text yields the 0 sentinel, which callers must rank last.
inline double compression_ratio(const word_sequence& seq, std::size_t trunc,
                                int level = 9) {
    if (trunc < 1) throw config_error("CR: truncation length must be >= 1");
    if (level < 1 || level > 9)
        throw config_error("CR: compression level must be in 1..9");
    if (seq.empty()) return 0.0;
    const std::string text = join_words(seq.words(), trunc);
    uLongf compressed_size = compressBound(static_cast<uLong>(text.size()));
    std::vector<Bytef> buf(compressed_size);
    const int rc = compress2(buf.data(), &compressed_size,
                             reinterpret_cast<const Bytef*>(text.data()),
                             static_cast<uLong>(text.size()), level);
    if (rc != Z_OK) throw data_error("CR: zlib compression failed");
    return static_cast<double>(text.size()) / static_cast<double>(compressed_size);
}

// Sum over n = 1..max_order of (distinct n-grams / total n-grams) over
// contiguous token windows; orders with no n-grams are skipped. Tokens may
// be words or POS tags.
inline double ngram_diversity(const std::vector<std::string>& tokens,
                              std::size_t max_order) {
    if (max_order < 1) throw config_error("NGRAM: max order must be >= 1");
    if (tokens.empty()) return 0.0;
    const auto ids = dense_ids(tokens);
    double score = 0.0;
    std::unordered_set<std::string> seen;
    std::string key;
    for (std::size_t n = 1; n <= max_order && n <= tokens.size(); ++n) {
        const std::size_t total = tokens.size() - n + 1;
        seen.clear();
        seen.reserve(total);
        for (std::size_t i = 0; i < total; ++i) {
            key.assign(reinterpret_cast<const char*>(ids.data() + i),
                       n * sizeof(std::uint32_t));
            seen.insert(key);
        }
        score += static_cast<double>(seen.size()) / static_cast<double>(total);
    }
    return score;
}

inline double ngram_diversity(const word_sequence& seq, std::size_t max_order) {
    return ngram_diversity(seq.words(), max_order);
}

// Scores every record under one metric configuration.
inline std::vector<diversity_score> score_corpus(
    const std::vector<text_record>& records, const metric_params& params);

// Evaluates one metric for one record. The caller supplies the tokenized
// text so several metrics can share a single tokenization.
inline double score_record(const text_record& rec, const word_sequence& seq,
                           const metric_params& params) {
    params.validate();
    switch (params.id) {
        case metric_id::ttr:
            return ttr(seq);
        case metric_id::pattr:
            return pattr(seq, params.target_length);
        case metric_id::mattr:
            return mattr(seq, params.window);
        case metric_id::cr:
            return compression_ratio(seq, params.trunc, params.compression_level);
        case metric_id::ngram:
            if (params.source == ngram_source::pos) {
                if (!rec.pos_tags)
                    throw data_error("record \"" + rec.id + "\" has no pos_tags");
                return ngram_diversity(*rec.pos_tags, params.max_order);
            }
            return ngram_diversity(seq, params.max_order);
    }
    throw config_error("unknown metric id");
}

inline std::vector<diversity_score> score_corpus(
    const std::vector<text_record>& records, const metric_params& params) {
    std::vector<diversity_score> out;
    out.reserve(records.size());
    for (const auto& rec : records)
        out.push_back({rec.id, params, score_record(rec, tokenize(rec.text), params)});
    return out;
}

}  // namespace lexdiv
