// lexdiv: batch front-end for length-robust lexical diversity scoring and
// corpus filtering. Subcommands: score, filter, winrate, correlate, compare,
// promptgen. Every run is a pure function of (input files, flags, seed);
// re-running produces byte-identical output.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexdiv/analysis.hpp"
#include "lexdiv/corpus.hpp"
#include "lexdiv/errors.hpp"
#include "lexdiv/homogenization.hpp"
#include "lexdiv/metrics.hpp"
#include "lexdiv/parallel.hpp"
#include "lexdiv/promptgen.hpp"
#include "lexdiv/report_io.hpp"
#include "lexdiv/stats.hpp"
#include "lexdiv/version.hpp"

namespace {

using nlohmann::json;

unsigned worker_cap_from_env() {
    const char* env = std::getenv("LEXDIV_THREADS");
    if (!env || !*env) return 0;  // auto
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
        throw lexdiv::config_error("LEXDIV_THREADS must be a non-negative integer");
    return static_cast<unsigned>(v);
}

struct metric_flags {
    std::vector<std::string> names;
    std::vector<std::size_t> target_lengths;  // PATTR L_T values, one metric each
    std::size_t window = 32;
    std::size_t trunc = 128;
    int level = 9;
    std::size_t ngram_max = 6;
    std::string ngram_tokens = "word";
};

void add_metric_options(CLI::App* cmd, metric_flags& flags, bool multi) {
    auto* opt = cmd->add_option("--metric", flags.names,
                                "Metric: TTR, PATTR, MATTR, CR, or NGRAM");
    opt->required();
    if (!multi) opt->expected(1);
    cmd->add_option("--lt", flags.target_lengths,
                    "PATTR target length(s) in words (default 400)");
    cmd->add_option("--window", flags.window, "MATTR window length in words");
    cmd->add_option("--trunc", flags.trunc, "CR truncation length in words");
    cmd->add_option("--level", flags.level, "CR compression level (1-9)");
    cmd->add_option("--ngram-max", flags.ngram_max, "NGRAM maximum order");
    cmd->add_option("--ngram-tokens", flags.ngram_tokens,
                    "NGRAM token source: word or pos");
}

std::vector<lexdiv::metric_params> expand_metrics(const metric_flags& flags) {
    using lexdiv::metric_params;
    std::vector<std::size_t> lts = flags.target_lengths;
    if (lts.empty()) lts.push_back(400);
    lexdiv::ngram_source src;
    if (flags.ngram_tokens == "word") src = lexdiv::ngram_source::words;
    else if (flags.ngram_tokens == "pos") src = lexdiv::ngram_source::pos;
    else throw lexdiv::config_error("--ngram-tokens must be word or pos");

    std::vector<metric_params> metrics;
    for (std::string name : flags.names) {
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (name == "TTR") {
            metrics.push_back(metric_params::make_ttr());
        } else if (name == "PATTR") {
            for (const std::size_t lt : lts)
                metrics.push_back(metric_params::make_pattr(lt));
        } else if (name == "MATTR") {
            metrics.push_back(metric_params::make_mattr(flags.window));
        } else if (name == "CR") {
            metrics.push_back(metric_params::make_cr(flags.trunc, flags.level));
        } else if (name == "NGRAM") {
            metrics.push_back(metric_params::make_ngram(flags.ngram_max, src));
        } else {
            throw lexdiv::config_error("unknown metric \"" + name + "\"");
        }
    }
    for (const auto& m : metrics) m.validate();
    return metrics;
}

json metrics_config(const std::vector<lexdiv::metric_params>& metrics) {
    json arr = json::array();
    for (const auto& m : metrics) arr.push_back(m.header());
    return arr;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lexdiv::data_error("cannot open output file: " + path);
    return out;
}

void write_csv_preamble(std::ostream& out, const std::string& command,
                        const json& config) {
    out << "# tool=lexdiv version=" << lexdiv::kVersion << " command=" << command
        << "\n";
    for (const auto& [key, value] : config.items()) {
        out << "# " << key << "=";
        if (value.is_string()) out << value.get<std::string>();
        else out << value.dump();
        out << "\n";
    }
}

json report_envelope(const std::string& command, const json& config) {
    json j;
    j["tool"] = "lexdiv";
    j["version"] = lexdiv::kVersion;
    j["command"] = command;
    j["config"] = config;
    j["methods"] = lexdiv::methods_metadata();
    return j;
}

// One streamed corpus record scored under every requested metric. Text is
// not retained.
struct scored_row {
    std::string id;
    std::size_t length = 0;
    std::optional<std::string> model;
    std::optional<int> num_instructions;
    std::optional<std::string> prompt_id;
    std::vector<double> scores;
};

// Streams the corpus in batches, scoring records in parallel while keeping
// file order. Returns the record count.
std::size_t stream_scored_rows(const std::string& path,
                               const std::vector<lexdiv::metric_params>& metrics,
                               unsigned workers,
                               const std::function<void(scored_row&&)>& on_row) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lexdiv::data_error("cannot open corpus file: " + path);
    constexpr std::size_t kBatch = 1024;
    std::unordered_map<std::string, std::size_t> first_line;
    std::vector<std::string> lines;
    std::vector<scored_row> rows;
    std::string line;
    std::size_t line_base = 0;  // line number of lines[0] minus 1
    std::size_t count = 0;
    bool more = true;
    while (more) {
        lines.clear();
        while (lines.size() < kBatch && std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
        if (in.bad()) throw lexdiv::data_error("read error on corpus file: " + path);
        more = !in.eof();
        if (lines.empty()) break;
        rows.assign(lines.size(), scored_row{});
        lexdiv::parallel_for(lines.size(), workers, [&](std::size_t i) {
            lexdiv::text_record rec =
                lexdiv::parse_record_line(lines[i], line_base + i + 1);
            const lexdiv::word_sequence seq = lexdiv::tokenize(rec.text);
            scored_row row;
            row.length = seq.size();
            row.scores.reserve(metrics.size());
            for (const auto& m : metrics)
                row.scores.push_back(lexdiv::score_record(rec, seq, m));
            row.id = std::move(rec.id);
            row.model = std::move(rec.model);
            row.num_instructions = rec.num_instructions;
            row.prompt_id = std::move(rec.prompt_id);
            rows[i] = std::move(row);
        });
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto [it, inserted] =
                first_line.emplace(rows[i].id, line_base + i + 1);
            if (!inserted)
                throw lexdiv::data_error("duplicate id \"" + rows[i].id +
                                         "\" at lines " + std::to_string(it->second) +
                                         " and " + std::to_string(line_base + i + 1));
            on_row(std::move(rows[i]));
            ++count;
        }
        line_base += lines.size();
    }
    return count;
}

// Collects the full records for a set of ids; callers impose their own order.
std::unordered_map<std::string, lexdiv::text_record> collect_records(
    const std::string& path, const std::unordered_set<std::string>& ids) {
    std::unordered_map<std::string, lexdiv::text_record> found;
    lexdiv::for_each_record(path, [&](lexdiv::text_record&& rec, std::size_t) {
        if (ids.count(rec.id)) found.emplace(rec.id, std::move(rec));
    });
    return found;
}

// ---------------------------------------------------------------------------
// score

struct score_options {
    std::string in_path;
    std::string out_path;
    metric_flags metrics;
    std::string format = "csv";
    std::uint64_t seed = 0;
};

void cmd_score(const score_options& opt) {
    const auto metrics = expand_metrics(opt.metrics);
    const unsigned workers = worker_cap_from_env();
    json config{{"in", opt.in_path},
                {"metrics", metrics_config(metrics)},
                {"seed", opt.seed},
                {"format", opt.format}};
    auto out = open_output(opt.out_path);
    std::size_t count = 0;
    if (opt.format == "csv") {
        write_csv_preamble(out, "score", config);
        out << "id,length";
        for (const auto& m : metrics) out << ',' << lexdiv::csv_field(m.header());
        out << "\n";
        count = stream_scored_rows(opt.in_path, metrics, workers,
                                   [&](scored_row&& row) {
                                       out << lexdiv::csv_field(row.id) << ','
                                           << row.length;
                                       for (const double s : row.scores)
                                           out << ',' << lexdiv::format_double(s);
                                       out << "\n";
                                   });
    } else {
        // rows stream directly so the corpus never sits in memory
        json meta = report_envelope("score", config);
        out << "{\"meta\":" << meta.dump() << ",\"rows\":[";
        bool first = true;
        count = stream_scored_rows(
            opt.in_path, metrics, workers, [&](scored_row&& row) {
                json scores;
                for (std::size_t i = 0; i < metrics.size(); ++i)
                    scores[metrics[i].header()] = row.scores[i];
                json jrow{{"id", row.id}, {"length", row.length}, {"scores", scores}};
                out << (first ? "\n" : ",\n") << jrow.dump();
                first = false;
            });
        out << "\n]}\n";
    }
    if (count == 0) throw lexdiv::data_error("empty corpus: " + opt.in_path);
}

// ---------------------------------------------------------------------------
// filter

struct filter_options {
    std::string in_path;
    std::string out_path;
    metric_flags metrics;
    std::size_t min_len = 0;
    std::optional<std::size_t> max_len;
    std::size_t top_k = 10;
    std::uint64_t seed = 0;
    std::size_t pairs_max = 1000;
    std::string format = "json";
};

void cmd_filter(const filter_options& opt) {
    const auto metrics = expand_metrics(opt.metrics);
    if (metrics.size() != 1)
        throw lexdiv::config_error("filter: exactly one metric configuration required");
    const auto& params = metrics.front();
    if (opt.top_k < 1) throw lexdiv::config_error("filter: --top-k must be >= 1");
    lexdiv::length_constraint constraint;
    constraint.min_words = opt.min_len;
    if (opt.max_len) constraint.max_words = *opt.max_len;
    constraint.validate();
    const unsigned workers = worker_cap_from_env();

    // Pass 1: rank survivors without retaining text.
    std::vector<lexdiv::scored_member> survivors;
    const std::size_t count = stream_scored_rows(
        opt.in_path, metrics, workers, [&](scored_row&& row) {
            if (constraint.contains(row.length))
                survivors.push_back({std::move(row.id), row.length, row.scores[0]});
        });
    if (count == 0) throw lexdiv::data_error("empty corpus: " + opt.in_path);
    const std::size_t survivor_count = survivors.size();
    const bool higher = lexdiv::higher_is_better(params.id);
    std::sort(survivors.begin(), survivors.end(),
              [&](const auto& a, const auto& b) {
                  return lexdiv::ranks_ahead(a, b, higher);
              });
    if (survivors.size() > opt.top_k) survivors.resize(opt.top_k);

    // Pass 2: reload just the selected records for the evaluation block.
    std::unordered_set<std::string> wanted;
    for (const auto& m : survivors) wanted.insert(m.id);
    auto records = collect_records(opt.in_path, wanted);
    std::vector<const lexdiv::text_record*> selection;
    selection.reserve(survivors.size());
    for (const auto& m : survivors) selection.push_back(&records.at(m.id));

    const auto report = lexdiv::build_filter_report(
        params, constraint, opt.top_k, opt.seed, opt.pairs_max, survivor_count,
        selection);

    json config{{"in", opt.in_path},
                {"metric", params.header()},
                {"min_len", constraint.min_words},
                {"max_len", constraint.bounded() ? json(constraint.max_words) : json()},
                {"top_k", opt.top_k},
                {"seed", opt.seed},
                {"pairs_max", opt.pairs_max},
                {"format", opt.format}};
    auto out = open_output(opt.out_path);
    if (opt.format == "csv") {
        write_csv_preamble(out, "filter", config);
        out << lexdiv::filter_csv_header() << "\n"
            << lexdiv::filter_csv_row(report) << "\n";
    } else {
        json envelope = report_envelope("filter", config);
        envelope["report"] = lexdiv::to_json(report);
        out << envelope.dump(2) << "\n";
    }
}

// ---------------------------------------------------------------------------
// winrate

struct winrate_options {
    std::string in_path;
    std::string out_path;
    metric_flags metrics;
    std::string format = "csv";
    std::uint64_t seed = 0;
};

void cmd_winrate(const winrate_options& opt) {
    const auto metrics = expand_metrics(opt.metrics);
    const unsigned workers = worker_cap_from_env();

    struct member_row {
        std::string id;
        std::size_t length;
        std::vector<double> scores;
    };
    using pool_key = std::tuple<std::string, int, std::string>;
    std::map<std::string, std::map<pool_key, std::vector<member_row>>> by_model;
    std::size_t skipped_records = 0;
    const std::size_t count = stream_scored_rows(
        opt.in_path, metrics, workers, [&](scored_row&& row) {
            if (!row.model || !row.num_instructions || !row.prompt_id) {
                ++skipped_records;
                return;
            }
            pool_key key{*row.model, *row.num_instructions, *row.prompt_id};
            by_model[*row.model][key].push_back(
                {std::move(row.id), row.length, std::move(row.scores)});
        });
    if (count == 0) throw lexdiv::data_error("empty corpus: " + opt.in_path);

    // Table-2 shape: one row per model, one column per metric config.
    struct model_result {
        std::string model;
        std::vector<lexdiv::win_rate_result> per_metric;
    };
    std::vector<model_result> results;
    for (const auto& [model, groups] : by_model) {
        model_result mr;
        mr.model = model;
        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
            std::vector<std::vector<lexdiv::scored_member>> pools;
            pools.reserve(groups.size());
            for (const auto& [key, members] : groups) {
                std::vector<lexdiv::scored_member> pool;
                pool.reserve(members.size());
                for (const auto& m : members)
                    pool.push_back({m.id, m.length, m.scores[mi]});
                pools.push_back(std::move(pool));
            }
            mr.per_metric.push_back(lexdiv::win_rate_over_pools(pools, metrics[mi]));
        }
        results.push_back(std::move(mr));
    }

    json config{{"in", opt.in_path},
                {"metrics", metrics_config(metrics)},
                {"seed", opt.seed},
                {"format", opt.format},
                {"skipped_records", skipped_records}};
    auto out = open_output(opt.out_path);
    if (opt.format == "csv") {
        write_csv_preamble(out, "winrate", config);
        out << "model";
        for (const auto& m : metrics) out << ',' << lexdiv::csv_field(m.header());
        out << ",pools,skipped_pools\n";
        for (const auto& mr : results) {
            out << lexdiv::csv_field(mr.model);
            for (const auto& r : mr.per_metric) {
                out << ',';
                out << (r.win_rate_percent
                            ? lexdiv::format_double(*r.win_rate_percent)
                            : std::string("NA"));
            }
            out << ',' << mr.per_metric.front().pools_evaluated << ','
                << mr.per_metric.front().pools_skipped << "\n";
        }
        if (results.empty()) out << "# no pools: corpus lacks pool metadata\n";
    } else {
        json envelope = report_envelope("winrate", config);
        json models = json::array();
        for (const auto& mr : results) {
            json jm{{"model", mr.model}};
            json per_metric = json::array();
            for (const auto& r : mr.per_metric) per_metric.push_back(lexdiv::to_json(r));
            jm["results"] = per_metric;
            models.push_back(jm);
        }
        envelope["models"] = models;
        out << envelope.dump(2) << "\n";
    }
}

// ---------------------------------------------------------------------------
// correlate

struct correlate_options {
    std::string in_path;
    std::string out_path;
    metric_flags metrics;
    std::string format = "json";
    std::uint64_t seed = 0;
};

void cmd_correlate(const correlate_options& opt) {
    const auto metrics = expand_metrics(opt.metrics);
    if (metrics.size() != 1)
        throw lexdiv::config_error("correlate: exactly one metric configuration required");
    const unsigned workers = worker_cap_from_env();
    std::vector<double> scores;
    std::vector<double> lengths;
    const std::size_t count = stream_scored_rows(
        opt.in_path, metrics, workers, [&](scored_row&& row) {
            scores.push_back(row.scores[0]);
            lengths.push_back(static_cast<double>(row.length));
        });
    if (count == 0) throw lexdiv::data_error("empty corpus: " + opt.in_path);
    if (count < 3) throw lexdiv::data_error("correlate: need at least 3 records");
    const auto corr = lexdiv::stats::spearman(scores, lengths);

    json config{{"in", opt.in_path},
                {"metric", metrics.front().header()},
                {"seed", opt.seed},
                {"format", opt.format}};
    auto out = open_output(opt.out_path);
    if (opt.format == "csv") {
        write_csv_preamble(out, "correlate", config);
        out << "metric,rho,p,n\n";
        out << lexdiv::csv_field(metrics.front().header()) << ','
            << lexdiv::format_double(corr.rho) << ','
            << lexdiv::format_double(corr.p_value) << ',' << corr.n << "\n";
    } else {
        json envelope = report_envelope("correlate", config);
        envelope["correlation"] = lexdiv::to_json(corr);
        envelope["correlation"]["metric"] = metrics.front().header();
        out << envelope.dump(2) << "\n";
    }
}

// ---------------------------------------------------------------------------
// compare

struct compare_options {
    std::string in_path;   // corpus
    std::string sel_a;     // filter report JSON
    std::string sel_b;
    std::string similarity = "rougeL";
    std::string out_path;
    std::string format = "json";
};

struct loaded_selection {
    std::string metric_header;
    std::vector<std::string> ids;  // ranked
};

loaded_selection load_selection(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lexdiv::data_error("cannot open selection file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw lexdiv::data_error("selection parse error in " + path + ": " + e.what());
    }
    loaded_selection sel;
    try {
        sel.metric_header = j.at("report").at("metric").get<std::string>();
        sel.ids = j.at("report").at("selected").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw lexdiv::data_error("not a filter report: " + path + ": " + e.what());
    }
    return sel;
}

lexdiv::similarity_id parse_similarity(const std::string& name) {
    if (name == "rouge1") return lexdiv::similarity_id::rouge1;
    if (name == "rouge2") return lexdiv::similarity_id::rouge2;
    if (name == "rougeL") return lexdiv::similarity_id::rougeL;
    if (name == "bleu") return lexdiv::similarity_id::bleu;
    throw lexdiv::config_error("unknown similarity metric \"" + name +
                               "\" (rouge1|rouge2|rougeL|bleu)");
}

void cmd_compare(const compare_options& opt) {
    const auto sim = parse_similarity(opt.similarity);
    const auto sel_a = load_selection(opt.sel_a);
    const auto sel_b = load_selection(opt.sel_b);
    std::unordered_set<std::string> wanted(sel_a.ids.begin(), sel_a.ids.end());
    wanted.insert(sel_b.ids.begin(), sel_b.ids.end());
    const auto records = collect_records(opt.in_path, wanted);
    const auto resolve = [&](const std::vector<std::string>& ids) {
        std::vector<const lexdiv::text_record*> out;
        out.reserve(ids.size());
        for (const auto& id : ids) {
            const auto it = records.find(id);
            if (it == records.end())
                throw lexdiv::data_error("selection id \"" + id +
                                         "\" not found in corpus");
            out.push_back(&it->second);
        }
        return out;
    };
    const auto report =
        lexdiv::sensitivity_ttest(resolve(sel_a.ids), resolve(sel_b.ids), sim);

    json config{{"in", opt.in_path},
                {"selection_a", sel_a.metric_header},
                {"selection_b", sel_b.metric_header},
                {"similarity", opt.similarity},
                {"format", opt.format}};
    auto out = open_output(opt.out_path);
    if (opt.format == "csv") {
        write_csv_preamble(out, "compare", config);
        out << "metric_a,metric_b,similarity,mean_length_diff,t,p,df,n_a,n_b\n";
        out << lexdiv::csv_field(sel_a.metric_header) << ','
            << lexdiv::csv_field(sel_b.metric_header) << ',' << opt.similarity << ','
            << lexdiv::format_double(report.mean_length_diff) << ','
            << lexdiv::format_double(report.welch.t) << ','
            << lexdiv::format_double(report.welch.p_value) << ','
            << lexdiv::format_double(report.welch.df) << ',' << report.pairs_a << ','
            << report.pairs_b << "\n";
    } else {
        json envelope = report_envelope("compare", config);
        envelope["ttest"] = lexdiv::to_json(report);
        out << envelope.dump(2) << "\n";
    }
}

// ---------------------------------------------------------------------------
// promptgen

struct promptgen_options {
    std::string spec_path;
    std::string topics_path;
    std::string out_path;
    std::size_t styles_per_topic = 10;
    std::uint64_t seed = 0;
};

void cmd_promptgen(const promptgen_options& opt) {
    const auto spec = lexdiv::prompt_spec::load(opt.spec_path);
    std::ifstream in(opt.topics_path, std::ios::binary);
    if (!in) throw lexdiv::data_error("cannot open topics file: " + opt.topics_path);
    std::vector<std::string> topics;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) topics.push_back(line);
    }
    if (topics.empty())
        throw lexdiv::data_error("topics file is empty: " + opt.topics_path);
    const auto matrix =
        lexdiv::generate_matrix(spec, topics, opt.styles_per_topic, opt.seed);
    auto out = open_output(opt.out_path);
    for (const auto& input : matrix) {
        const json j{{"prompt_id", input.prompt_id},
                     {"num_instructions", input.num_instructions},
                     {"style_id", input.style_id},
                     {"system", input.system_text},
                     {"user", input.user_text}};
        out << j.dump() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lexdiv: length-robust lexical diversity scoring and filtering"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lexdiv::kVersion);

    score_options score_opt;
    auto* score = app.add_subcommand("score", "Per-record diversity scores");
    score->add_option("--in", score_opt.in_path, "Input corpus (JSONL)")->required();
    score->add_option("--out", score_opt.out_path, "Output file")->required();
    add_metric_options(score, score_opt.metrics, true);
    score->add_option("--format", score_opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    score->add_option("--seed", score_opt.seed, "RNG seed echoed into the report");

    filter_options filter_opt;
    auto* filter = app.add_subcommand("filter", "Length-constrained top-k selection");
    filter->add_option("--in", filter_opt.in_path, "Input corpus (JSONL)")->required();
    filter->add_option("--out", filter_opt.out_path, "Output file")->required();
    add_metric_options(filter, filter_opt.metrics, false);
    filter->add_option("--min-len", filter_opt.min_len, "Minimum word count (inclusive)");
    filter->add_option("--max-len", filter_opt.max_len, "Maximum word count (inclusive)");
    filter->add_option("--top-k", filter_opt.top_k, "Selection size");
    filter->add_option("--seed", filter_opt.seed, "RNG seed for pair sampling");
    filter->add_option("--pairs-max", filter_opt.pairs_max,
                       "Cap on sampled pairs for homogenization");
    filter->add_option("--format", filter_opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    winrate_options winrate_opt;
    auto* winrate = app.add_subcommand("winrate", "Short-response win rate per model");
    winrate->add_option("--in", winrate_opt.in_path, "Input corpus (JSONL)")->required();
    winrate->add_option("--out", winrate_opt.out_path, "Output file")->required();
    add_metric_options(winrate, winrate_opt.metrics, true);
    winrate->add_option("--format", winrate_opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    winrate->add_option("--seed", winrate_opt.seed, "RNG seed echoed into the report");

    correlate_options correlate_opt;
    auto* correlate =
        app.add_subcommand("correlate", "Spearman correlation of metric vs length");
    correlate->add_option("--in", correlate_opt.in_path, "Input corpus (JSONL)")->required();
    correlate->add_option("--out", correlate_opt.out_path, "Output file")->required();
    add_metric_options(correlate, correlate_opt.metrics, false);
    correlate->add_option("--format", correlate_opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    correlate->add_option("--seed", correlate_opt.seed, "RNG seed echoed into the report");

    compare_options compare_opt;
    auto* compare =
        app.add_subcommand("compare", "Welch t-test between two filter selections");
    compare->add_option("--in", compare_opt.in_path, "Corpus the selections came from")
        ->required();
    compare->add_option("--sel-a", compare_opt.sel_a, "Filter report JSON (side a)")
        ->required();
    compare->add_option("--sel-b", compare_opt.sel_b, "Filter report JSON (side b)")
        ->required();
    compare->add_option("--similarity", compare_opt.similarity,
                        "rouge1, rouge2, rougeL, or bleu");
    compare->add_option("--out", compare_opt.out_path, "Output file")->required();
    compare->add_option("--format", compare_opt.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    promptgen_options promptgen_opt;
    auto* promptgen =
        app.add_subcommand("promptgen", "Emit the structured prompt matrix");
    promptgen->add_option("--spec", promptgen_opt.spec_path, "Prompt spec JSON")
        ->required();
    promptgen->add_option("--topics", promptgen_opt.topics_path,
                          "Topics file, one per line")
        ->required();
    promptgen->add_option("--styles-per-topic", promptgen_opt.styles_per_topic,
                          "Style triples sampled per topic (1-125)");
    promptgen->add_option("--seed", promptgen_opt.seed, "RNG seed for style sampling");
    promptgen->add_option("--out", promptgen_opt.out_path, "Output JSONL")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (score->parsed()) cmd_score(score_opt);
        else if (filter->parsed()) cmd_filter(filter_opt);
        else if (winrate->parsed()) cmd_winrate(winrate_opt);
        else if (correlate->parsed()) cmd_correlate(correlate_opt);
        else if (compare->parsed()) cmd_compare(compare_opt);
        else if (promptgen->parsed()) cmd_promptgen(promptgen_opt);
        return 0;
    } catch (const lexdiv::config_error& e) {
        std::cerr << "lexdiv: " << e.what() << "\n";
        return 2;
    } catch (const lexdiv::data_error& e) {
        std::cerr << "lexdiv: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "lexdiv: " << e.what() << "\n";
        return 3;
    }
}
