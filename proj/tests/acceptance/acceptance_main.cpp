// Acceptance suite: end-to-end checks of the metric identities, oracle
// equivalences, bias-direction properties, prompt matrix, and CLI
// determinism/throughput. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "lexdiv/analysis.hpp"
#include "lexdiv/corpus.hpp"
#include "lexdiv/homogenization.hpp"
#include "lexdiv/metrics.hpp"
#include "lexdiv/promptgen.hpp"
#include "lexdiv/stats.hpp"
#include "lexdiv/tokenize.hpp"
#include "support/tempdir.hpp"
#include "support/zipf.hpp"

using lexdiv::word_sequence;
using testsupport::temp_dir;
using testsupport::zipf_text_source;

namespace {

struct check_failure : std::runtime_error {
    explicit check_failure(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool condition, const std::string& message) {
    if (!condition) throw check_failure(message);
}

void require_near(double got, double expected, double tolerance,
                  const std::string& label) {
    if (!(std::fabs(got - expected) <= tolerance))
        throw check_failure(label + ": got " + std::to_string(got) + ", expected " +
                            std::to_string(expected) + " +/- " +
                            std::to_string(tolerance));
}

class harness {
  public:
    // budget_seconds <= 0 means no stated runtime limit.
    void run(int number, const std::string& name, double budget_seconds,
             const std::function<void()>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            body();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (failure.empty() && budget_seconds > 0.0 && elapsed >= budget_seconds)
            failure = "runtime " + std::to_string(elapsed) + "s exceeds budget " +
                      std::to_string(budget_seconds) + "s";
        std::ostringstream line;
        line << (failure.empty() ? "[PASS]" : "[FAIL]") << " C" << number << ' '
             << name << "  [" << std::fixed << std::setprecision(2) << elapsed
             << "s]";
        if (!failure.empty()) line << "\n       " << failure;
        std::cout << line.str() << std::endl;
        ++total_;
        if (!failure.empty()) ++failed_;
    }

    int total() const { return total_; }
    int failed() const { return failed_; }

  private:
    int total_ = 0;
    int failed_ = 0;
};

// ---------------------------------------------------------------------------
// shared synthetic fixtures

constexpr std::uint64_t kSuiteSeed = 20240501;

std::vector<word_sequence> random_zipf_texts(std::size_t count, std::size_t min_len,
                                             std::size_t max_len, std::uint64_t seed,
                                             std::size_t vocab = 20000,
                                             double exponent = 1.1) {
    zipf_text_source source(vocab, exponent, seed);
    std::mt19937_64 rng(seed + 1);
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::vector<word_sequence> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(word_sequence(source.sample_words(len(rng))));
    return out;
}

// 100 pools x 10 members over a shared Zipfian vocabulary, reused by the
// bias and correlation criteria. The 500-word vocabulary gives the strongly
// sublinear vocabulary growth of natural text at these lengths.
const std::vector<std::vector<word_sequence>>& pool_suite() {
    static const auto pools = [] {
        zipf_text_source source(500, 1.1, kSuiteSeed);
        std::mt19937_64 rng(kSuiteSeed + 1);
        std::uniform_int_distribution<std::size_t> len(100, 700);
        std::vector<std::vector<word_sequence>> out;
        out.reserve(100);
        for (int p = 0; p < 100; ++p) {
            std::vector<word_sequence> members;
            members.reserve(10);
            for (int m = 0; m < 10; ++m)
                members.push_back(word_sequence(source.sample_words(len(rng))));
            out.push_back(std::move(members));
        }
        return out;
    }();
    return pools;
}

double short_win_rate(const std::function<double(const word_sequence&)>& score,
                      bool higher_better) {
    std::vector<std::vector<lexdiv::scored_member>> pools;
    pools.reserve(pool_suite().size());
    for (const auto& members : pool_suite()) {
        std::vector<lexdiv::scored_member> scored;
        scored.reserve(members.size());
        for (std::size_t m = 0; m < members.size(); ++m)
            scored.push_back({"m" + std::to_string(m), members[m].size(),
                              score(members[m])});
        pools.push_back(std::move(scored));
    }
    // direction handled here; metric id only carries the label
    const auto params = higher_better ? lexdiv::metric_params::make_ttr()
                                      : lexdiv::metric_params::make_cr(128);
    const auto result = lexdiv::win_rate_over_pools(pools, params);
    return *result.win_rate_percent;
}

// ---------------------------------------------------------------------------
// criteria

void criterion_metric_identities() {
    const auto texts = random_zipf_texts(1000, 1, 2000, kSuiteSeed + 10);
    std::mt19937_64 rng(kSuiteSeed + 11);
    std::uniform_int_distribution<std::size_t> target(1, 2500);
    for (const auto& seq : texts) {
        const double plain = lexdiv::ttr(seq);
        require(lexdiv::pattr(seq, seq.size()) == plain,
                "pattr at the text's own length must equal ttr exactly");
        const double penalized = lexdiv::pattr(seq, target(rng));
        require(penalized <= plain, "pattr must never exceed ttr");
        require(plain >= 0.0 && plain <= 1.0, "ttr outside [0,1]");
        require(penalized >= 0.0 && penalized <= 1.0, "pattr outside [0,1]");
        const double moving = lexdiv::mattr(seq, 32);
        require(moving >= 0.0 && moving <= 1.0, "mattr outside [0,1]");
    }
}

void criterion_mattr_oracle() {
    // Brute-force oracle: fresh distinct-count per window.
    const auto brute = [](const word_sequence& seq, std::size_t window) {
        if (seq.size() == 0) return 0.0;
        if (seq.size() <= window) return lexdiv::ttr(seq);
        const auto ids = lexdiv::dense_ids(seq.words());
        double sum = 0.0;
        const std::size_t windows = seq.size() - window + 1;
        for (std::size_t start = 0; start < windows; ++start) {
            std::unordered_set<std::uint32_t> distinct(ids.begin() + start,
                                                       ids.begin() + start + window);
            sum += static_cast<double>(distinct.size()) / static_cast<double>(window);
        }
        return sum / static_cast<double>(windows);
    };
    const std::size_t windows[] = {2, 32, 128, 512};
    std::size_t checked = 0;
    for (std::size_t w = 0; w < 4; ++w) {
        const auto texts = random_zipf_texts(50, 1, 2000, kSuiteSeed + 20 + w);
        for (const auto& seq : texts) {
            require_near(lexdiv::mattr(seq, windows[w]), brute(seq, windows[w]), 1e-12,
                         "mattr vs brute force (W=" + std::to_string(windows[w]) + ")");
            ++checked;
        }
    }
    require(checked == 200, "expected 200 oracle comparisons");
    // explicit W >= L fallback
    const auto small = word_sequence({"a", "b", "a"});
    require(lexdiv::mattr(small, 512) == lexdiv::ttr(small),
            "W >= L must fall back to plain ttr");
}

void criterion_length_bias() {
    const double ttr_rate =
        short_win_rate([](const word_sequence& s) { return lexdiv::ttr(s); }, true);
    require(ttr_rate > 50.0,
            "ttr short-win rate " + std::to_string(ttr_rate) + " not above 50%");
    // CR over the full generated length range (truncation 700 covers every
    // member); truncating below the text length is itself a length-bias
    // mitigation and would mask the effect being demonstrated.
    const double cr_rate = short_win_rate(
        [](const word_sequence& s) { return lexdiv::compression_ratio(s, 700); },
        false);
    require(cr_rate > 50.0,
            "cr short-win rate " + std::to_string(cr_rate) + " not above 50%");
    const auto pattr_rate = [](std::size_t lt) {
        return short_win_rate(
            [lt](const word_sequence& s) { return lexdiv::pattr(s, lt); }, true);
    };
    const double at200 = pattr_rate(200);
    const double at400 = pattr_rate(400);
    const double at600 = pattr_rate(600);
    require(at600 < 5.0,
            "pattr L_T=600 short-win rate " + std::to_string(at600) + " not below 5%");
    require(at200 > at400 && at400 > at600,
            "pattr short-win rate must strictly decrease over L_T 200/400/600 (got " +
                std::to_string(at200) + ", " + std::to_string(at400) + ", " +
                std::to_string(at600) + ")");
    std::cout << "       (short-win %: ttr " << ttr_rate << ", cr " << cr_rate
              << ", pattr " << at200 << " / " << at400 << " / " << at600
              << " at L_T 200/400/600)" << std::endl;
}

void criterion_correlation_signs() {
    std::vector<const word_sequence*> texts;
    for (const auto& members : pool_suite())
        for (const auto& seq : members) texts.push_back(&seq);
    std::vector<double> lengths;
    lengths.reserve(texts.size());
    for (const auto* seq : texts) lengths.push_back(static_cast<double>(seq->size()));
    const auto rho_at = [&](double cut) {
        const auto lt = static_cast<std::size_t>(
            std::llround(lexdiv::stats::percentile(lengths, cut)));
        std::vector<double> scores;
        scores.reserve(texts.size());
        for (const auto* seq : texts) scores.push_back(lexdiv::pattr(*seq, lt));
        return lexdiv::stats::spearman(scores, lengths).rho;
    };
    const double low = rho_at(10.0);
    const double mid = rho_at(50.0);
    const double high = rho_at(90.0);
    require(low < -0.2, "rho at the 10th-percentile target is " + std::to_string(low) +
                            ", expected < -0.2");
    require(std::fabs(mid) <= 0.15, "rho at the median-matched target is " +
                                        std::to_string(mid) + ", expected within 0.15 of 0");
    require(high > 0.5, "rho at the 90th-percentile target is " + std::to_string(high) +
                            ", expected > +0.5");
    std::cout << "       (spearman rho: " << low << " / " << mid << " / " << high
              << " at L_T = p10/median/p90 of length)" << std::endl;
}

void criterion_homogenization_oracles() {
    const word_sequence abc({"a", "b", "c"});
    const word_sequence abd({"a", "b", "d"});
    require_near(lexdiv::rouge_n(abc, abd, 1), 2.0 / 3.0, 1e-9, "rouge-1 fixture");
    require_near(lexdiv::rouge_l(word_sequence({"x", "y"}), word_sequence({"y", "x"})),
                 0.5, 1e-9, "rouge-L fixture");
    const word_sequence cand({"a", "b", "c", "d"});
    const word_sequence ref({"a", "b", "c", "d", "e"});
    require_near(lexdiv::bleu(cand, ref), 0.77880078307140488, 1e-9,
                 "bleu brevity-penalty fixture");
    // identity and disjoint extremes
    for (const auto* seq : {&abc, &cand, &ref}) {
        require(lexdiv::rouge_n(*seq, *seq, 1) == 1.0, "rouge-1 self score");
        require(lexdiv::rouge_n(*seq, *seq, 2) == 1.0, "rouge-2 self score");
        require(lexdiv::rouge_l(*seq, *seq) == 1.0, "rouge-L self score");
        require(lexdiv::bleu(*seq, *seq) == 1.0, "bleu self score");
    }
    const word_sequence left({"p", "q", "r", "s"});
    const word_sequence right({"w", "x", "y", "z"});
    require(lexdiv::rouge_n(left, right, 1) == 0.0, "rouge-1 disjoint");
    require(lexdiv::rouge_n(left, right, 2) == 0.0, "rouge-2 disjoint");
    require(lexdiv::rouge_l(left, right) == 0.0, "rouge-L disjoint");
    require(lexdiv::bleu(left, right) <= 1e-6, "bleu disjoint above the smoothing floor");
}

void criterion_wasserstein_oracle() {
    const word_sequence skewed({"a", "a", "a", "b"});
    require_near(lexdiv::wasserstein_to_uniform({&skewed}), 0.25, 1e-12,
                 "wasserstein counts [3,1]");
    const word_sequence distinct({"a", "b", "c", "d", "e"});
    require(lexdiv::wasserstein_to_uniform({&distinct}) == 0.0,
            "wasserstein of an all-distinct corpus");
    const auto texts = random_zipf_texts(10, 50, 300, kSuiteSeed + 30);
    std::vector<const word_sequence*> once;
    std::vector<const word_sequence*> twice;
    for (const auto& seq : texts) {
        once.push_back(&seq);
        twice.push_back(&seq);
    }
    for (const auto& seq : texts) twice.push_back(&seq);
    require_near(lexdiv::wasserstein_to_uniform(twice),
                 lexdiv::wasserstein_to_uniform(once), 1e-12,
                 "wasserstein scale invariance under duplication");
}

void criterion_pair_sampling() {
    const auto all = lexdiv::sample_pairs(10, 1000, kSuiteSeed);
    require(all.index_pairs.size() == 45, "k=10 must yield all 45 pairs");
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = i + 1; j < 10; ++j) expected.insert({i, j});
    require(std::set<std::pair<std::size_t, std::size_t>>(all.index_pairs.begin(),
                                                          all.index_pairs.end()) ==
                expected,
            "k=10 pair set mismatch");

    const auto capped = lexdiv::sample_pairs(100, 1000, kSuiteSeed);
    require(capped.index_pairs.size() == 1000, "k=100 must yield exactly 1000 pairs");
    require(std::set<std::pair<std::size_t, std::size_t>>(capped.index_pairs.begin(),
                                                          capped.index_pairs.end())
                    .size() == 1000,
            "k=100 pairs must be distinct");
    for (const auto& [i, j] : capped.index_pairs)
        require(i < j && j < 100, "pair indices out of range");
    for (int run = 0; run < 10; ++run)
        require(lexdiv::sample_pairs(100, 1000, kSuiteSeed).index_pairs ==
                    capped.index_pairs,
                "pair sample must be identical across runs with a fixed seed");
}

void criterion_statistics_oracles() {
    // Spearman vs rank-then-pearson brute force.
    std::mt19937_64 rng(kSuiteSeed + 40);
    std::uniform_int_distribution<int> len(3, 50);
    std::uniform_int_distribution<int> value(0, 19);
    int done = 0;
    while (done < 100) {
        const int n = len(rng);
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(value(rng));
            y.push_back(value(rng));
        }
        const auto rx = lexdiv::stats::average_ranks(x);
        const auto ry = lexdiv::stats::average_ranks(y);
        double mx = 0.0, my = 0.0;
        for (int i = 0; i < n; ++i) {
            mx += rx[i];
            my += ry[i];
        }
        mx /= n;
        my /= n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (int i = 0; i < n; ++i) {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
            syy += (ry[i] - my) * (ry[i] - my);
        }
        if (sxx == 0.0 || syy == 0.0) continue;  // constant draw, spearman undefined
        const double expected = sxy / std::sqrt(sxx * syy);
        require_near(lexdiv::stats::spearman(x, y).rho, expected, 1e-9,
                     "spearman vs brute force");
        ++done;
    }
    // Welch fixtures, frozen from an independent reference implementation.
    const auto r1 = lexdiv::stats::welch_t_test({0, 0, 0, 0}, {1, 1, 1, 2});
    require_near(r1.t, -5.0, 1e-9, "welch fixture t");
    require_near(r1.df, 3.0, 1e-9, "welch fixture df");
    require_near(r1.p_value, 0.015392438073302296, 1e-9, "welch fixture p");
    const auto r2 = lexdiv::stats::welch_t_test({14.1, 13.3, 12.8, 13.9, 14.5},
                                                {12.0, 12.5, 11.8, 13.1});
    require_near(r2.t, 3.2789886060191895, 1e-9, "welch fixture 2 t");
    require_near(r2.p_value, 0.01373081664917733, 1e-9, "welch fixture 2 p");
    const std::vector<double> same{0.2, 0.5, 0.9, 0.4};
    require(lexdiv::stats::welch_t_test(same, same).t == 0.0,
            "identical samples must give t = 0");
}

void criterion_ngram_diversity() {
    require_near(lexdiv::ngram_diversity({"a", "a", "a"}, 2), 1.0 / 3.0 + 1.0 / 2.0,
                 1e-12, "ngram fixture [a,a,a] N=2");
    const auto texts = random_zipf_texts(100, 1, 500, kSuiteSeed + 50);
    for (const auto& seq : texts)
        require(lexdiv::ngram_diversity(seq, 1) == lexdiv::ttr(seq),
                "ngram N=1 must equal ttr");
    std::vector<std::string> distinct;
    for (int i = 0; i < 60; ++i) distinct.push_back("d" + std::to_string(i));
    for (const std::size_t order : {1ul, 2ul, 4ul, 6ul})
        require(lexdiv::ngram_diversity(distinct, order) ==
                    static_cast<double>(order),
                "all-distinct text must score 1 per order");
}

void criterion_prompt_matrix() {
    const char* env = std::getenv("LEXDIV_DATA_DIR");
    const std::string dir = env && *env ? env : "data";
    const auto spec = lexdiv::prompt_spec::load(dir + "/promptspec.json");

    std::vector<std::string> topics;
    for (int i = 0; i < 120; ++i) {
        std::ostringstream t;
        t << "Topic " << std::setw(3) << std::setfill('0') << i
          << ": a placeholder user request.";
        topics.push_back(t.str());
    }
    const auto matrix = lexdiv::generate_matrix(spec, topics, 10, kSuiteSeed);
    require(matrix.size() == 12000, "matrix must have exactly 12000 inputs");
    std::set<std::string> distinct_inputs;
    for (const auto& input : matrix)
        distinct_inputs.insert(input.system_text + '\x1f' + input.user_text);
    require(distinct_inputs.size() == 12000, "matrix inputs must be distinct");

    for (std::size_t k = 0; k <= 8; ++k) {
        const auto shorter = lexdiv::instruction_block(spec, k);
        const auto longer = lexdiv::instruction_block(spec, k + 1);
        require(longer.compare(0, shorter.size(), shorter) == 0,
                "instruction block k must be a prefix of block k+1");
    }

    const auto worked = lexdiv::compose(
        spec, 2, {"General Audience", "Romantic", "Product Showcase"},
        "Explain the process of making sourdough bread at home from scratch.");
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
    require(worked.system_text == expected_system,
            "worked example system text differs from the shipped spec rendering");
    require(worked.user_text == expected_user,
            "worked example user text differs from the shipped spec rendering");
}

void criterion_end_to_end() {
    const char* bin = std::getenv("LEXDIV_BIN");
    require(bin && *bin, "LEXDIV_BIN is not set; run through ctest");
    temp_dir dir;

    // ~20M words over 100k records (lengths 150..250).
    const std::string corpus = dir.file("e2e.jsonl");
    std::uint64_t total_words = 0;
    {
        std::ofstream out(corpus, std::ios::binary);
        zipf_text_source source(50000, 1.1, kSuiteSeed + 60);
        std::mt19937_64 rng(kSuiteSeed + 61);
        std::uniform_int_distribution<std::size_t> len(150, 250);
        for (int i = 0; i < 100000; ++i) {
            const std::size_t n = len(rng);
            total_words += n;
            out << "{\"id\":\"r" << std::setw(6) << std::setfill('0') << i
                << "\",\"text\":\"" << source.sample_text(n) << "\"}\n";
        }
    }
    require(total_words >= 19000000, "corpus fell short of ~20M words");

    const auto run_once = [&](const std::string& out_path) {
        const std::string cmd = std::string("\"") + bin + "\" score --in \"" + corpus +
                                "\" --metric PATTR --lt 400 --metric MATTR "
                                "--metric CR --format csv --seed 1 --out \"" +
                                out_path + "\" 2> \"" + dir.file("e2e.err") + "\"";
        const auto start = std::chrono::steady_clock::now();
        const int status = std::system(cmd.c_str());
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        require(status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0,
                "scoring run failed");
        return elapsed;
    };
    const double first = run_once(dir.file("run1.csv"));
    const double second = run_once(dir.file("run2.csv"));
    require(first < 300.0 && second < 300.0,
            "scoring exceeded 5 minutes (" + std::to_string(first) + "s / " +
                std::to_string(second) + "s)");
    require(testsupport::read_file(dir.file("run1.csv")) ==
                testsupport::read_file(dir.file("run2.csv")),
            "same-seed runs must be byte-identical");
    std::cout << "       (scored " << total_words << " words twice: " << std::fixed
              << std::setprecision(1) << first << "s, " << second << "s on "
              << std::thread::hardware_concurrency() << " hardware threads)"
              << std::endl;
}

}  // namespace

int main() {
    std::cout << "lexdiv acceptance suite" << std::endl;
    harness h;
    h.run(1, "metric identities: pattr/ttr agreement and bounds", 5.0,
          criterion_metric_identities);
    h.run(2, "mattr incremental implementation matches brute force", 10.0,
          criterion_mattr_oracle);
    h.run(3, "length-bias direction: ttr/cr favor short, pattr does not", 30.0,
          criterion_length_bias);
    h.run(4, "pattr-length correlation flips sign with the target", 10.0,
          criterion_correlation_signs);
    h.run(5, "rouge and bleu oracle fixtures", 1.0, criterion_homogenization_oracles);
    h.run(6, "wasserstein oracle fixtures", 1.0, criterion_wasserstein_oracle);
    h.run(7, "pair sampling: coverage, cap, determinism", 1.0,
          criterion_pair_sampling);
    h.run(8, "spearman and welch statistics oracles", 0.0,
          criterion_statistics_oracles);
    h.run(9, "n-gram diversity fixtures and ttr identity", 0.0,
          criterion_ngram_diversity);
    h.run(10, "prompt matrix size, prefix property, worked example", 0.0,
          criterion_prompt_matrix);
    h.run(11, "end-to-end determinism and throughput (~20M words)", 0.0,
          criterion_end_to_end);
    std::cout << (h.total() - h.failed()) << "/" << h.total() << " criteria passed"
              << std::endl;
    return h.failed() == 0 ? 0 : 1;
}
