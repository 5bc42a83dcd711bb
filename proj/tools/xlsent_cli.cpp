// Copyright 2026 The xlsent Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: preprocess, align, train, predict, evaluate,
// baseline, folds and synth.
//
// Exit codes: 0 success, 1 runtime or data error, 2 usage error,
// 3 leakage detected by the evaluation harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xlsent/align.hpp"
#include "xlsent/baselines.hpp"
#include "xlsent/corpus.hpp"
#include "xlsent/eval.hpp"
#include "xlsent/nn/train.hpp"
#include "xlsent/preprocess.hpp"
#include "xlsent/synthetic.hpp"

namespace fs = std::filesystem;
using namespace xlsent;
using synthetic::TrilingualOptions;
using synthetic::trilingual;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLeak = 3;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ArgumentError("cannot write '" + path + "'");
    return os;
}

LanguageSet parse_languages(const std::string& s) {
    LanguageSet out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.insert(part);
    }
    if (out.empty()) throw ArgumentError("empty language list");
    return out;
}

/// Applies "key=value" overrides given on the command line.
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string in, out, mode = "whitespace", format = "jsonl", languages = "en,ja,zh", dropped;
};

int run_preprocess(const PreprocessArgs& a) {
    const auto langs = parse_languages(a.languages);
    const auto rules = NormalizationRuleSet::defaults();
    rules.validate(langs);
    const auto records = load_corpus(a.in, parse_corpus_format(a.format), langs);
    const auto pc = preprocess_corpus(records, rules, parse_tokenize_mode(a.mode));
    auto os = open_out(a.out);
    write_tokenized_jsonl(os, pc.tweets);
    if (!a.dropped.empty()) {
        auto ds = open_out(a.dropped);
        for (const auto& id : pc.dropped_ids) ds << id << '\n';
    }
    std::printf("kept %zu, dropped %zu\n", pc.tweets.size(), pc.dropped_ids.size());
    return 0;
}

// ---------------------------------------------------------------------------

struct AlignArgs {
    std::string src, tgt, src_lang, tgt_lang, dict, freq, out, side = "target";
    std::size_t k = 3500, train = 3000;
    std::uint64_t seed = 0;
    bool report = false;
};

int run_align(const AlignArgs& a) {
    const auto src = load_embedding_table(a.src, a.src_lang.empty() ? stem_of(a.src) : a.src_lang);
    const auto tgt = load_embedding_table(a.tgt, a.tgt_lang.empty() ? stem_of(a.tgt) : a.tgt_lang);
    const auto dict = load_dictionary(a.dict);
    if (a.side != "source" && a.side != "target") throw ArgumentError("--side expects source or target");
    const auto side = a.side == "source" ? PivotSide::source : PivotSide::target;

    // Without a frequency file the ranked table's own order stands in for
    // frequency, as word2vec-style files are usually sorted that way.
    FrequencyRanks ranks;
    if (!a.freq.empty()) {
        ranks = load_frequency_tsv(a.freq);
    } else {
        const auto& words = (side == PivotSide::target ? tgt : src).words();
        for (std::size_t i = 0; i < words.size(); ++i) ranks.emplace(words[i], i + 1);
    }
    const PivotSelection sel{a.k, a.train, a.seed, side};
    const auto pairs = select_pivot_pairs(ranks, dict, sel, src.lang(), tgt.lang(), [&](const PivotPair& p) {
        return src.contains(p.src) && tgt.contains(p.tgt);
    });
    const auto tm = fit_translation_matrix(pairs.train, src, tgt);
    auto os = open_out(a.out);
    write_translation_matrix(os, tm);

    std::printf("%s -> %s  dim %zu  train pairs %zu  test pairs %zu  residual %.6g\n", tm.src_lang.c_str(),
                tm.tgt_lang.c_str(), tm.dim(), pairs.train.size(), pairs.test.size(), tm.fit_residual);
    if (tm.underdetermined) std::printf("warning: fewer pairs than dimensions, ridge lambda %g\n", tm.ridge_lambda);
    if (a.report) {
        if (pairs.test.empty()) {
            std::printf("no test pairs to report on\n");
        } else {
            const auto r = alignment_report(pairs.test, src, tgt, tm);
            std::printf("test pairs %zu\n", r.pairs);
            std::printf("euclidean sum  before %.4f  after %.4f\n", r.euclidean_sum_before, r.euclidean_sum_after);
            std::printf("cosine sum     before %.4f  after %.4f\n", r.cosine_sum_before, r.cosine_sum_after);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string config, out, log, kind;
    std::vector<std::string> sets;
};

int run_train(const TrainArgs& a) {
    auto cfg = load_experiment_config(a.config);
    apply_overrides(cfg, a.sets);
    if (!a.kind.empty()) cfg.set("model", a.kind);
    if (!is_neural(cfg.model)) throw ConfigError("train needs model = cnn or lstm; use baseline for nb/svm");
    if (cfg.alignment == AlignmentMode::refit) {
        throw ConfigError("train does not refit alignments; fit them with 'align' and use translation_matrix");
    }
    // A single model has no folds; only the settings that matter here are checked.
    if (!(cfg.dev_fraction > 0.0 && cfg.dev_fraction < 1.0)) throw ConfigError("dev_fraction must lie in (0, 1)");
    cfg.train.validate();

    const auto in = load_experiment_inputs(cfg);
    const auto pool = scoped_tweets(cfg, in);
    if (pool.empty()) throw ConfigError("no tweets in scope '" + cfg.scope + "'");
    std::vector<std::string> ids;
    std::set<std::string> langs;
    for (const auto& t : pool) {
        ids.push_back(t.id);
        langs.insert(t.lang);
    }
    const auto [train_ids, dev_ids] = split_dev(ids, cfg.dev_fraction, derive_seed(cfg.seed, 0xDE0));
    const std::unordered_set<std::string> dev_set(dev_ids.begin(), dev_ids.end());
    std::vector<TokenizedTweet> train, dev;
    for (const auto& t : pool) (dev_set.contains(t.id) ? dev : train).push_back(t);

    const auto ctx = make_context(cfg, in, langs);
    auto tc = cfg.train;
    tc.seed = derive_seed(cfg.seed, 0x7EA1);
    const auto kind = cfg.model == ClassifierKind::lstm ? nn::ModelKind::lstm : nn::ModelKind::cnn;
    const auto model = nn::train(kind, train, dev, ctx, tc, [](const nn::EpochRecord& r) {
        std::printf("epoch %3zu  loss %.5f  dev accuracy %.4f\n", r.epoch, r.train_loss, r.dev_accuracy);
        std::fflush(stdout);
    });
    nn::save_model(a.out, model);
    if (!a.log.empty()) {
        auto os = open_out(a.log);
        nn::write_training_log(os, model.history);
    }
    std::printf("best epoch %zu, %zu training and %zu dev tweets, model written to %s\n", model.best_epoch,
                train.size(), dev.size(), a.out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

struct PredictArgs {
    std::string config, model, in, out;
    std::vector<std::string> sets;
};

int run_predict(const PredictArgs& a) {
    auto cfg = load_experiment_config(a.config);
    apply_overrides(cfg, a.sets);
    if (cfg.alignment == AlignmentMode::refit) {
        throw ConfigError("predict needs fixed alignments; use translation_matrix");
    }
    cfg.corpus = a.in;
    const auto model = nn::load_model(a.model);
    const auto in = load_experiment_inputs(cfg);
    std::set<std::string> langs;
    for (const auto& t : in.tweets) langs.insert(t.lang);
    const auto ctx = make_context(cfg, in, langs);
    const auto preds = nn::predict(model, in.tweets, ctx);

    auto os = open_out(a.out);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        nlohmann::json j;
        j["id"] = in.tweets[i].id;
        j["lang"] = in.tweets[i].lang;
        j["label"] = std::string(to_string(preds[i].label));
        j["probs"] = std::vector<double>(preds[i].probs.data(), preds[i].probs.data() + preds[i].probs.size());
        os << j.dump() << '\n';
    }
    std::printf("%zu predictions written to %s\n", preds.size(), a.out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::vector<std::string> configs, sets;
    std::string baseline, report_dir, compare_csv;
};

void write_reports(const std::string& dir, const CVReport& r) {
    fs::create_directories(dir);
    auto csv = open_out((fs::path(dir) / (r.name + ".csv")).string());
    write_report_csv(csv, r);
    auto txt = open_out((fs::path(dir) / (r.name + ".txt")).string());
    write_report_text(txt, r);
}

int run_evaluate(const EvaluateArgs& a) {
    std::vector<CVReport> reports;
    for (const auto& path : a.configs) {
        auto cfg = load_experiment_config(path);
        apply_overrides(cfg, a.sets);
        auto r = run_experiment(cfg);
        write_report_text(std::cout, r);
        if (!a.report_dir.empty()) write_reports(a.report_dir, r);
        reports.push_back(std::move(r));
    }
    const auto cmp = compare_runs(reports, a.baseline);
    if (reports.size() > 1) {
        std::cout << '\n';
        write_comparison_text(std::cout, cmp);
    }
    if (!a.compare_csv.empty()) {
        auto os = open_out(a.compare_csv);
        write_comparison_csv(os, cmp);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct BaselineArgs {
    std::string corpus, format = "jsonl", mode = "whitespace", languages = "en,ja,zh", model = "svm",
                        scheme = "cumulative", scope = "all", event = "multinomial";
    std::string dump_features, dump_model, report_dir;
    double c = 1.0, alpha = 1.0;
    std::size_t folds = 10, threads = 1;
    std::uint64_t seed = 1;
};

int run_baseline(const BaselineArgs& a) {
    ExperimentConfig cfg;
    cfg.name = a.model + "_" + a.scheme;
    for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{
             {"corpus", a.corpus},
             {"corpus_format", a.format},
             {"tokenize", a.mode},
             {"languages", a.languages},
             {"model", a.model},
             {"scheme", a.scheme},
             {"scope", a.scope},
             {"nb_event", a.event}}) {
        cfg.set(k, v);
    }
    if (is_neural(cfg.model)) throw ConfigError("baseline expects --model nb or svm");
    cfg.c = a.c;
    cfg.alpha = a.alpha;
    cfg.folds = a.folds;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    cfg.validate();

    const auto in = load_experiment_inputs(cfg);
    const auto r = run_experiment(cfg, in);
    write_report_text(std::cout, r);
    if (!a.report_dir.empty()) write_reports(a.report_dir, r);

    if (!a.dump_features.empty() || !a.dump_model.empty()) {
        // Dumps describe a model fitted on every in-scope tweet.
        const auto pool = scoped_tweets(cfg, in);
        const auto space = build_feature_space(pool, cfg.scheme);
        if (!a.dump_features.empty()) {
            auto os = open_out(a.dump_features);
            write_feature_space(os, space);
        }
        if (!a.dump_model.empty()) {
            std::vector<SparseBinaryVector> docs;
            std::vector<Polarity> labels;
            for (const auto& t : pool) {
                docs.push_back(vectorize(t, space));
                labels.push_back(t.label);
            }
            auto os = open_out(a.dump_model);
            if (cfg.model == ClassifierKind::nb) {
                write_nb_model(os, train_nb(docs, labels, space.size(), cfg.alpha, cfg.nb_event));
            } else {
                write_svm_model(os, train_svm_ovo(docs, labels, space.size(), {cfg.c}));
            }
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct FoldsArgs {
    std::string corpus, format = "jsonl", languages = "en,ja,zh", out;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    bool no_stratify = false;
};

int run_folds(const FoldsArgs& a) {
    const auto records = load_corpus(a.corpus, parse_corpus_format(a.format), parse_languages(a.languages));
    const auto plan = make_folds(records, a.folds, a.seed, !a.no_stratify);
    if (a.out.empty()) {
        std::cout << plan.to_tsv();
    } else {
        auto os = open_out(a.out);
        os << plan.to_tsv();
    }
    const auto sizes = plan.fold_sizes();
    std::fprintf(stderr, "%zu records in %zu folds of %zu..%zu\n", records.size(), plan.k,
                 *std::min_element(sizes.begin(), sizes.end()), *std::max_element(sizes.begin(), sizes.end()));
    return 0;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string out;
    std::uint64_t seed = 1;
    std::size_t dim = 20;
    std::string tweets = "300,75,75";
};

int run_synth(const SynthArgs& a) {
    TrilingualOptions opt;
    opt.seed = a.seed;
    opt.dim = a.dim;
    opt.tweets_per_lang.clear();
    std::stringstream ss(a.tweets);
    std::string part;
    while (std::getline(ss, part, ',')) opt.tweets_per_lang.push_back(std::stoul(part));
    const auto fx = trilingual(opt);
    const auto& pivot = fx.pivot_lang;

    const fs::path dir(a.out);
    fs::create_directories(dir);
    auto path = [&](const std::string& name) { return (dir / name).string(); };
    {
        auto os = open_out(path("corpus.jsonl"));
        for (const auto& r : fx.records) {
            nlohmann::json j;
            j["id"] = r.id;
            j["lang"] = r.lang;
            j["label"] = std::string(to_string(r.label));
            j["text"] = r.text;
            os << j.dump() << '\n';
        }
    }
    for (const auto& [lang, table] : fx.tables) {
        auto os = open_out(path(lang + ".vec"));
        write_embedding_table(os, table);
    }
    for (const auto& [lang, dict] : fx.dictionaries) {
        auto os = open_out(path(lang + "-" + pivot + ".tsv"));
        for (const auto& e : dict) os << e.src << '\t' << e.tgt << '\n';
    }
    {
        std::vector<std::pair<std::size_t, std::string>> by_rank;
        for (const auto& [w, r] : fx.pivot_ranks) by_rank.emplace_back(r, w);
        std::sort(by_rank.begin(), by_rank.end());
        auto os = open_out(path(pivot + ".freq.tsv"));
        for (const auto& [r, w] : by_rank) os << w << '\t' << (100000 / r + 1) << '\n';
    }

    // Sample configurations. Matrix paths refer to files produced by 'align'.
    const std::size_t concepts = opt.fillers + kNumClasses * opt.markers_per_class;
    const std::size_t k = concepts * 2 / 3;
    auto common = [&](std::ostream& os, const std::string& name, const std::string& model) {
        os << "name = " << name << "\ncorpus = " << path("corpus.jsonl") << "\nmodel = " << model
           << "\nfolds = 5\nseed = " << a.seed << '\n';
    };
    auto embeddings = [&](std::ostream& os) {
        for (const auto& [lang, t] : fx.tables) os << "embeddings." << lang << " = " << path(lang + ".vec") << '\n';
        os << "filters = 20\nmax_epochs = 15\npatience = 5\n";
    };
    {
        auto os = open_out(path("svm.cfg"));
        common(os, "svm_cumulative", "svm");
        os << "scheme = cumulative\nc = 1\n";
    }
    {
        auto os = open_out(path("nb.cfg"));
        common(os, "nb_cumulative", "nb");
        os << "scheme = cumulative\nalpha = 1\n";
    }
    {
        auto os = open_out(path("cnn_raw.cfg"));
        common(os, "cnn_raw", "cnn");
        embeddings(os);
    }
    {
        auto os = open_out(path("cnn_aligned.cfg"));
        common(os, "cnn_aligned", "cnn");
        embeddings(os);
        os << "alignment = translation_matrix\npivot = " << pivot << '\n';
        for (const auto& [lang, d] : fx.dictionaries) {
            os << "matrix." << lang << " = " << path("W_" + lang + "_" + pivot + ".mat") << '\n';
        }
    }
    std::printf("%zu tweets, %zu languages, dim %zu written to %s\n", fx.records.size(), fx.tables.size(), opt.dim,
                a.out.c_str());
    for (const auto& [lang, d] : fx.dictionaries) {
        std::printf("align with: xlsent align --src %s --tgt %s --dict %s --freq %s --k %zu --train %zu --out %s\n",
                    path(lang + ".vec").c_str(), path(pivot + ".vec").c_str(),
                    path(lang + "-" + pivot + ".tsv").c_str(), path(pivot + ".freq.tsv").c_str(), k, k * 4 / 5,
                    path("W_" + lang + "_" + pivot + ".mat").c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-lingual tweet sentiment classification"};
    app.require_subcommand(1);

    PreprocessArgs pa;
    auto* pre = app.add_subcommand("preprocess", "Normalize and tokenize a corpus into tokenized JSONL");
    pre->add_option("--in", pa.in, "Input corpus")->required();
    pre->add_option("--out", pa.out, "Output JSONL")->required();
    pre->add_option("--mode", pa.mode, "whitespace or pretokenized")->check(CLI::IsMember({"whitespace", "pretokenized"}));
    pre->add_option("--format", pa.format, "jsonl or tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
    pre->add_option("--languages", pa.languages, "Accepted language codes, comma-separated");
    pre->add_option("--dropped", pa.dropped, "Write ids of records that normalized to nothing");

    AlignArgs aa;
    auto* al = app.add_subcommand("align", "Fit a translation matrix from a source space into a pivot space");
    al->add_option("--src", aa.src, "Source embeddings (.vec)")->required();
    al->add_option("--tgt", aa.tgt, "Pivot embeddings (.vec)")->required();
    al->add_option("--src-lang", aa.src_lang, "Source language (default: file stem)");
    al->add_option("--tgt-lang", aa.tgt_lang, "Pivot language (default: file stem)");
    al->add_option("--dict", aa.dict, "Dictionary TSV src<TAB>tgt")->required();
    al->add_option("--freq", aa.freq, "Frequency TSV word<TAB>count for the ranked side");
    al->add_option("--side", aa.side, "Which dictionary side the ranks refer to")->check(CLI::IsMember({"source", "target"}));
    al->add_option("--k", aa.k, "Pivot pairs to select");
    al->add_option("--train", aa.train, "Pairs used for fitting; the rest are test pairs");
    al->add_option("--seed", aa.seed, "Train/test split seed");
    al->add_option("--out", aa.out, "Output matrix file")->required();
    al->add_flag("--report", aa.report, "Print distance sums on the test pairs");

    TrainArgs ta;
    auto* tr = app.add_subcommand("train", "Train one neural model on the whole in-scope corpus");
    tr->add_option("--config", ta.config, "Experiment config")->required();
    tr->add_option("--kind", ta.kind, "Override the model kind")->check(CLI::IsMember({"cnn", "lstm"}));
    tr->add_option("--set", ta.sets, "Override a config key (key=value)");
    tr->add_option("--out", ta.out, "Checkpoint path")->required();
    tr->add_option("--log", ta.log, "Training log CSV");

    PredictArgs pr;
    auto* pd = app.add_subcommand("predict", "Label a corpus with a trained model");
    pd->add_option("--config", pr.config, "Config naming the embeddings and matrices")->required();
    pd->add_option("--set", pr.sets, "Override a config key (key=value)");
    pd->add_option("--model", pr.model, "Checkpoint")->required();
    pd->add_option("--in", pr.in, "Corpus to label (format from the config)")->required();
    pd->add_option("--out", pr.out, "Predictions JSONL")->required();

    EvaluateArgs ea;
    auto* ev = app.add_subcommand("evaluate", "Cross-validate one or more configurations");
    ev->add_option("--config", ea.configs, "Experiment config (repeatable)")->required();
    ev->add_option("--set", ea.sets, "Override a key in every config (key=value)");
    ev->add_option("--baseline", ea.baseline, "Config name the deltas are taken against");
    ev->add_option("--report-dir", ea.report_dir, "Write <name>.csv and <name>.txt per config");
    ev->add_option("--compare-csv", ea.compare_csv, "Write the comparison table as CSV");

    BaselineArgs ba;
    auto* bl = app.add_subcommand("baseline", "Cross-validate an n-gram NB or SVM baseline");
    bl->add_option("--corpus", ba.corpus, "Corpus")->required();
    bl->add_option("--format", ba.format, "jsonl or tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
    bl->add_option("--mode", ba.mode, "whitespace or pretokenized")->check(CLI::IsMember({"whitespace", "pretokenized"}));
    bl->add_option("--languages", ba.languages, "Accepted language codes, comma-separated");
    bl->add_option("--scope", ba.scope, "all, or one language");
    bl->add_option("--model", ba.model, "nb or svm")->check(CLI::IsMember({"nb", "svm"}));
    bl->add_option("--scheme", ba.scheme, "per_language or cumulative")->check(CLI::IsMember({"per_language", "cumulative"}));
    bl->add_option("--c", ba.c, "SVM cost");
    bl->add_option("--alpha", ba.alpha, "NB smoothing");
    bl->add_option("--event", ba.event, "NB event model")->check(CLI::IsMember({"multinomial", "bernoulli"}));
    bl->add_option("--folds", ba.folds, "Fold count");
    bl->add_option("--seed", ba.seed, "Fold seed");
    bl->add_option("--threads", ba.threads, "Worker threads");
    bl->add_option("--report-dir", ba.report_dir, "Write the report as CSV and text");
    bl->add_option("--dump-features", ba.dump_features, "Feature space of the full corpus");
    bl->add_option("--dump-model", ba.dump_model, "Model fitted on the full corpus");

    FoldsArgs fa;
    auto* fo = app.add_subcommand("folds", "Print the fold assignment of a corpus");
    fo->add_option("--corpus", fa.corpus, "Corpus")->required();
    fo->add_option("--format", fa.format, "jsonl or tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
    fo->add_option("--languages", fa.languages, "Accepted language codes, comma-separated");
    fo->add_option("--folds", fa.folds, "Fold count");
    fo->add_option("--seed", fa.seed, "Seed");
    fo->add_flag("--no-stratify", fa.no_stratify, "Plain shuffle instead of per-label blocks");
    fo->add_option("--out", fa.out, "Output TSV (default stdout)");

    SynthArgs sa;
    auto* sy = app.add_subcommand("synth", "Write a synthetic trilingual corpus with embeddings and dictionaries");
    sy->add_option("--out", sa.out, "Output directory")->required();
    sy->add_option("--seed", sa.seed, "Generator seed");
    sy->add_option("--dim", sa.dim, "Embedding dimension");
    sy->add_option("--tweets", sa.tweets, "Tweets per language, pivot first (e.g. 300,75,75)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*pre) return run_preprocess(pa);
        if (*al) return run_align(aa);
        if (*tr) return run_train(ta);
        if (*pd) return run_predict(pr);
        if (*ev) return run_evaluate(ea);
        if (*bl) return run_baseline(ba);
        if (*fo) return run_folds(fa);
        if (*sy) return run_synth(sa);
    } catch (const LeakageError& e) {
        std::fprintf(stderr, "leakage: %s\n", e.what());
        return kExitLeak;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitUsage;
}
