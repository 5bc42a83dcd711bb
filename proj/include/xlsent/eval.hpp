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

#ifndef XLSENT_EVAL_HPP
#define XLSENT_EVAL_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "xlsent/align.hpp"
#include "xlsent/baselines.hpp"
#include "xlsent/context.hpp"
#include "xlsent/corpus.hpp"
#include "xlsent/embeddings.hpp"
#include "xlsent/error.hpp"
#include "xlsent/nn/train.hpp"
#include "xlsent/preprocess.hpp"
#include "xlsent/rng.hpp"

namespace xlsent {

enum class ClassifierKind { nb, svm, lstm, cnn };
enum class AlignmentMode { none, translation_matrix, refit };

inline std::string to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::nb: return "nb";
        case ClassifierKind::svm: return "svm";
        case ClassifierKind::lstm: return "lstm";
        case ClassifierKind::cnn: return "cnn";
    }
    return "?";
}

inline std::string to_string(AlignmentMode m) {
    switch (m) {
        case AlignmentMode::none: return "none";
        case AlignmentMode::translation_matrix: return "translation_matrix";
        case AlignmentMode::refit: return "refit";
    }
    return "?";
}

inline bool is_neural(ClassifierKind k) { return k == ClassifierKind::lstm || k == ClassifierKind::cnn; }

// ---------------------------------------------------------------------------
// Configuration

/// One cross-validation run. Read from a flat "key = value" file; '#' starts
/// a comment line. Per-language paths use dotted keys such as
/// "embeddings.ja" or "matrix.zh". Neural hyperparameters use the keys of
/// nn::TrainConfig, except that "seed" is the experiment seed.
struct ExperimentConfig {
    std::string name = "experiment";
    std::string corpus;
    CorpusFormat corpus_format = CorpusFormat::jsonl;
    TokenizeMode tokenize = TokenizeMode::whitespace;
    LanguageSet languages = default_languages();
    ClassifierKind model = ClassifierKind::cnn;
    /// "all", or a single language code.
    std::string scope = "all";
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    bool stratify = true;
    /// Share of each training split held out for early stopping (neural only).
    double dev_fraction = 0.1;
    std::size_t threads = 1;

    // baselines
    FeatureScheme scheme = FeatureScheme::cumulative;
    double alpha = 1.0;
    NbEvent nb_event = NbEvent::multinomial;
    double c = 1.0;

    // embeddings and alignment
    std::map<std::string, std::string> embeddings;
    AlignmentMode alignment = AlignmentMode::none;
    std::string pivot = "en";
    std::map<std::string, std::string> matrices;
    std::map<std::string, std::string> dictionaries;
    std::size_t pivot_k = 3500;
    std::size_t pivot_train = 3000;
    std::uint64_t oov_seed = 0;
    /// 0 selects the default scale for the embedding dimension.
    double oov_scale = 0.0;

    nn::TrainConfig train;

    /// Applies one key; unknown keys and bad values raise ConfigError.
    void set(const std::string& key, const std::string& value) {
        auto bad = [&](const std::string& expect) {
            throw ConfigError("'" + key + "' expects " + expect + ", got '" + value + "'");
        };
        auto to_size = [&](std::size_t& out) {
            const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc() || p != value.data() + value.size()) bad("a non-negative integer");
        };
        auto to_u64 = [&](std::uint64_t& out) {
            const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc() || p != value.data() + value.size()) bad("a non-negative integer");
        };
        auto to_double = [&](double& out) {
            if (!detail::parse_double(value, out)) bad("a number");
        };
        auto dotted = [&](std::string_view prefix, std::map<std::string, std::string>& into) {
            if (key.rfind(prefix, 0) != 0) return false;
            const auto lang = key.substr(prefix.size());
            if (lang.empty()) throw ConfigError("'" + key + "' needs a language suffix");
            into[lang] = value;
            return true;
        };
        if (key == "name") name = value;
        else if (key == "corpus") corpus = value;
        else if (key == "corpus_format") {
            try {
                corpus_format = parse_corpus_format(value);
            } catch (const ArgumentError&) {
                bad("jsonl or tsv");
            }
        } else if (key == "tokenize") {
            try {
                tokenize = parse_tokenize_mode(value);
            } catch (const Error&) {
                bad("whitespace or pretokenized");
            }
        } else if (key == "languages") {
            languages.clear();
            std::stringstream ss(value);
            std::string part;
            while (std::getline(ss, part, ',')) {
                if (!part.empty()) languages.insert(part);
            }
            if (languages.empty()) bad("a comma-separated language list");
        } else if (key == "model") {
            if (value == "nb") model = ClassifierKind::nb;
            else if (value == "svm") model = ClassifierKind::svm;
            else if (value == "lstm") model = ClassifierKind::lstm;
            else if (value == "cnn") model = ClassifierKind::cnn;
            else bad("nb, svm, lstm or cnn");
        } else if (key == "scope") scope = value;
        else if (key == "folds") to_size(folds);
        else if (key == "seed") to_u64(seed);
        else if (key == "stratify") {
            if (value == "true" || value == "1") stratify = true;
            else if (value == "false" || value == "0") stratify = false;
            else bad("true or false");
        } else if (key == "dev_fraction") to_double(dev_fraction);
        else if (key == "threads") to_size(threads);
        else if (key == "scheme") {
            const auto s = parse_feature_scheme(value);
            if (!s) bad("per_language or cumulative");
            scheme = *s;
        } else if (key == "alpha") to_double(alpha);
        else if (key == "nb_event") {
            if (value == "multinomial") nb_event = NbEvent::multinomial;
            else if (value == "bernoulli") nb_event = NbEvent::bernoulli;
            else bad("multinomial or bernoulli");
        } else if (key == "c") to_double(c);
        else if (key == "alignment") {
            if (value == "none") alignment = AlignmentMode::none;
            else if (value == "translation_matrix") alignment = AlignmentMode::translation_matrix;
            else if (value == "refit") alignment = AlignmentMode::refit;
            else bad("none, translation_matrix or refit");
        } else if (key == "pivot") pivot = value;
        else if (key == "pivot_k") to_size(pivot_k);
        else if (key == "pivot_train") to_size(pivot_train);
        else if (key == "oov_seed") to_u64(oov_seed);
        else if (key == "oov_scale") to_double(oov_scale);
        else if (dotted("embeddings.", embeddings) || dotted("matrix.", matrices) ||
                 dotted("dictionary.", dictionaries)) {
        } else if (!train.set(key, value)) {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }

    /// Every setting as key/value pairs, in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const {
        auto num = [](double x) { return detail::real17(x); };
        std::string langs;
        for (const auto& l : languages) langs += (langs.empty() ? "" : ",") + l;
        std::vector<std::pair<std::string, std::string>> out{
            {"name", name},
            {"corpus", corpus},
            {"corpus_format", corpus_format == CorpusFormat::jsonl ? "jsonl" : "tsv"},
            {"tokenize", tokenize == TokenizeMode::whitespace ? "whitespace" : "pretokenized"},
            {"languages", langs},
            {"model", to_string(model)},
            {"scope", scope},
            {"folds", std::to_string(folds)},
            {"seed", std::to_string(seed)},
            {"stratify", stratify ? "true" : "false"},
            {"dev_fraction", num(dev_fraction)},
            {"threads", std::to_string(threads)},
            {"scheme", to_string(scheme)},
            {"alpha", num(alpha)},
            {"nb_event", nb_event == NbEvent::multinomial ? "multinomial" : "bernoulli"},
            {"c", num(c)},
            {"alignment", to_string(alignment)},
            {"pivot", pivot},
            {"pivot_k", std::to_string(pivot_k)},
            {"pivot_train", std::to_string(pivot_train)},
            {"oov_seed", std::to_string(oov_seed)},
            {"oov_scale", num(oov_scale)},
        };
        for (const auto& [l, p] : embeddings) out.emplace_back("embeddings." + l, p);
        for (const auto& [l, p] : matrices) out.emplace_back("matrix." + l, p);
        for (const auto& [l, p] : dictionaries) out.emplace_back("dictionary." + l, p);
        for (auto& kv : train.entries()) {
            if (kv.first != "seed") out.push_back(std::move(kv));
        }
        return out;
    }

    /// Hash of everything except the run name and thread count, which do not
    /// change results.
    std::string fingerprint() const {
        std::uint64_t h = fnv1a("exp1");
        for (const auto& [k, v] : entries()) {
            if (k == "name" || k == "threads") continue;
            h = fnv1a(v, fnv1a(k + "=", h));
            h = fnv1a(";", h);
        }
        return hex64(h);
    }

    void validate() const {
        if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds, got " + std::to_string(folds));
        if (!(dev_fraction > 0.0 && dev_fraction < 1.0)) throw ConfigError("dev_fraction must lie in (0, 1)");
        if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
        if (!(c > 0.0)) throw ConfigError("c must be positive");
        if (threads == 0) throw ConfigError("threads must be at least 1");
        if (scope != "all" && !languages.contains(scope)) {
            throw ConfigError("scope '" + scope + "' is not one of the configured languages");
        }
        if (!is_neural(model) && alignment != AlignmentMode::none) {
            throw ConfigError("alignment applies only to neural models");
        }
        if (alignment == AlignmentMode::refit && pivot_train > pivot_k) {
            throw ConfigError("pivot_train exceeds pivot_k");
        }
        train.validate();
    }
};

inline ExperimentConfig read_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
        const auto key = trim(t.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", lineno);
        try {
            cfg.set(key, trim(t.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config '" + path + "'");
    return read_experiment_config(in);
}

inline void write_experiment_config(std::ostream& os, const ExperimentConfig& cfg) {
    for (const auto& [k, v] : cfg.entries()) os << k << " = " << v << '\n';
}

// ---------------------------------------------------------------------------
// Inputs

/// Everything a run reads, already in memory. Matrices are used by
/// translation_matrix mode, dictionaries by refit mode; both are keyed by
/// source language and map into the pivot language.
struct ExperimentInputs {
    std::vector<TokenizedTweet> tweets;
    std::map<std::string, std::shared_ptr<const EmbeddingTable>> tables;
    std::map<std::string, TranslationMatrix> matrices;
    std::map<std::string, BilingualDictionary> dictionaries;
    std::string preprocess_fingerprint;
};

/// Reads the corpus, embeddings, matrices and dictionaries named by `cfg`
/// and preprocesses the corpus with the default rules.
inline ExperimentInputs load_experiment_inputs(const ExperimentConfig& cfg) {
    ExperimentInputs in;
    if (cfg.corpus.empty()) throw ConfigError("no corpus configured");
    const auto rules = NormalizationRuleSet::defaults();
    rules.validate(cfg.languages);
    in.tweets = preprocess_corpus(load_corpus(cfg.corpus, cfg.corpus_format, cfg.languages), rules, cfg.tokenize).tweets;
    in.preprocess_fingerprint = rules.fingerprint();
    for (const auto& [lang, path] : cfg.embeddings) {
        in.tables.emplace(lang, std::make_shared<const EmbeddingTable>(load_embedding_table(path, lang)));
    }
    for (const auto& [lang, path] : cfg.matrices) in.matrices.emplace(lang, load_translation_matrix(path));
    for (const auto& [lang, path] : cfg.dictionaries) in.dictionaries.emplace(lang, load_dictionary(path));
    return in;
}

/// Pivot pairs picked by `ranks` over the target language, restricted to
/// words both tables know, then a least-squares fit on the training pairs.
inline TranslationMatrix fit_pivot_alignment(const FrequencyRanks& target_ranks, const BilingualDictionary& dict,
                                             const EmbeddingTable& src, const EmbeddingTable& tgt,
                                             const PivotSelection& sel) {
    const auto pairs = select_pivot_pairs(target_ranks, dict, sel, src.lang(), tgt.lang(), [&](const PivotPair& p) {
        return src.find(p.src) != nullptr && tgt.find(p.tgt) != nullptr;
    });
    return fit_translation_matrix(pairs.train, src, tgt);
}

/// Tweets of the configured languages and scope, in input order.
inline std::vector<TokenizedTweet> scoped_tweets(const ExperimentConfig& cfg, const ExperimentInputs& in) {
    std::vector<TokenizedTweet> pool;
    for (const auto& t : in.tweets) {
        if (!cfg.languages.contains(t.lang)) continue;
        if (cfg.scope != "all" && t.lang != cfg.scope) continue;
        pool.push_back(t);
    }
    return pool;
}

/// Embedding context over `langs` (plus the pivot when aligning) with the
/// configured fixed translation matrices. Refit mode adds its matrices per
/// fold, so here it only loads the tables.
inline EmbeddingContext make_context(const ExperimentConfig& cfg, const ExperimentInputs& in,
                                     std::set<std::string> langs) {
    EmbeddingContext ctx({cfg.oov_seed, cfg.oov_scale});
    ctx.set_preprocess_fingerprint(in.preprocess_fingerprint);
    if (cfg.alignment != AlignmentMode::none) langs.insert(cfg.pivot);
    for (const auto& l : langs) {
        const auto it = in.tables.find(l);
        if (it == in.tables.end()) throw ConfigError("no embedding table for language '" + l + "'");
        ctx.add_table(it->second);
    }
    if (cfg.alignment == AlignmentMode::translation_matrix) {
        for (const auto& l : langs) {
            if (l == cfg.pivot) continue;
            const auto it = in.matrices.find(l);
            if (it == in.matrices.end()) throw ConfigError("no translation matrix for language '" + l + "'");
            if (it->second.tgt_lang != cfg.pivot) {
                throw ConfigError("translation matrix for '" + l + "' maps into '" + it->second.tgt_lang +
                                  "', not the pivot '" + cfg.pivot + "'");
            }
            ctx.set_alignment(it->second);
        }
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Reports

struct LanguageTally {
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
    friend bool operator==(const LanguageTally&, const LanguageTally&) = default;
};

struct FoldResult {
    std::size_t fold = 0;
    std::size_t size = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::map<std::string, LanguageTally> by_language;
    /// Wall-clock seconds; not part of equality.
    double seconds = 0.0;

    friend bool operator==(const FoldResult& a, const FoldResult& b) {
        return a.fold == b.fold && a.size == b.size && a.correct == b.correct && a.accuracy == b.accuracy &&
               a.by_language == b.by_language;
    }
};

struct CVReport {
    std::string name;
    std::string model;
    std::string config_fingerprint;
    std::vector<FoldResult> folds;
    double mean_accuracy = 0.0;
    std::map<std::string, LanguageTally> by_language;
    double seconds = 0.0;

    /// Equality ignores wall-clock times.
    friend bool operator==(const CVReport& a, const CVReport& b) {
        return a.name == b.name && a.model == b.model && a.config_fingerprint == b.config_fingerprint &&
               a.folds == b.folds && a.mean_accuracy == b.mean_accuracy && a.by_language == b.by_language;
    }
};

/// Columns: fold, size, accuracy, seconds, then "<lang>_n,<lang>_accuracy"
/// per language; a final "mean" row holds pooled values.
inline void write_report_csv(std::ostream& os, const CVReport& r) {
    auto f = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", x);
        return std::string(buf);
    };
    os << "fold,size,accuracy,seconds";
    for (const auto& [l, t] : r.by_language) os << ',' << l << "_n," << l << "_accuracy";
    os << '\n';
    std::size_t total = 0;
    for (const auto& fr : r.folds) {
        total += fr.size;
        os << fr.fold << ',' << fr.size << ',' << f(fr.accuracy) << ',' << f(fr.seconds);
        for (const auto& [l, t] : r.by_language) {
            const auto it = fr.by_language.find(l);
            const LanguageTally lt = it == fr.by_language.end() ? LanguageTally{} : it->second;
            os << ',' << lt.total << ',' << f(lt.accuracy());
        }
        os << '\n';
    }
    os << "mean," << total << ',' << f(r.mean_accuracy) << ',' << f(r.seconds);
    for (const auto& [l, t] : r.by_language) os << ',' << t.total << ',' << f(t.accuracy());
    os << '\n';
}

inline void write_report_text(std::ostream& os, const CVReport& r) {
    char buf[160];
    os << r.name << "  (" << r.model << ", config " << r.config_fingerprint << ")\n";
    for (const auto& fr : r.folds) {
        std::snprintf(buf, sizeof buf, "  fold %2zu  n=%-5zu acc=%.4f  %.2fs\n", fr.fold, fr.size, fr.accuracy,
                      fr.seconds);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "  mean accuracy %.4f over %zu folds, %.2fs\n", r.mean_accuracy, r.folds.size(),
                  r.seconds);
    os << buf;
    for (const auto& [l, t] : r.by_language) {
        std::snprintf(buf, sizeof buf, "  %-6s n=%-5zu acc=%.4f\n", l.c_str(), t.total, t.accuracy());
        os << buf;
    }
}

struct ComparisonRow {
    std::string name;
    std::string model;
    double mean_accuracy = 0.0;
    std::optional<double> delta;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    std::string baseline;
    bool has_delta() const { return rows.size() > 1; }
};

/// Rows sorted by config name; deltas are against `baseline` (default: the
/// first row after sorting). A single report gets no delta column.
inline Comparison compare_runs(std::vector<CVReport> reports, const std::string& baseline = {}) {
    if (reports.empty()) throw ArgumentError("nothing to compare");
    std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    Comparison c;
    c.baseline = baseline.empty() ? reports.front().name : baseline;
    const auto base = std::find_if(reports.begin(), reports.end(), [&](const auto& r) { return r.name == c.baseline; });
    if (base == reports.end()) throw ArgumentError("baseline '" + c.baseline + "' is not among the reports");
    for (const auto& r : reports) {
        ComparisonRow row{r.name, r.model, r.mean_accuracy, std::nullopt};
        if (reports.size() > 1) row.delta = r.mean_accuracy - base->mean_accuracy;
        c.rows.push_back(std::move(row));
    }
    return c;
}

inline void write_comparison_text(std::ostream& os, const Comparison& c) {
    std::size_t w = 6;
    for (const auto& r : c.rows) w = std::max(w, r.name.size());
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %-5s  %-8s", static_cast<int>(w), "config", "model", "accuracy");
    os << buf << (c.has_delta() ? "  delta" : "") << '\n';
    for (const auto& r : c.rows) {
        std::snprintf(buf, sizeof buf, "%-*s  %-5s  %-8.3f", static_cast<int>(w), r.name.c_str(), r.model.c_str(),
                      r.mean_accuracy);
        os << buf;
        if (r.delta) {
            std::snprintf(buf, sizeof buf, "  %+.3f", *r.delta);
            os << buf;
        }
        os << '\n';
    }
}

inline void write_comparison_csv(std::ostream& os, const Comparison& c) {
    os << "config,model,accuracy" << (c.has_delta() ? ",delta" : "") << '\n';
    char buf[64];
    for (const auto& r : c.rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.mean_accuracy);
        os << r.name << ',' << r.model << ',' << buf;
        if (r.delta) {
            std::snprintf(buf, sizeof buf, ",%+.6f", *r.delta);
            os << buf;
        }
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Leakage audit

/// Knows the held-out ids of one fold and rejects any training artifact
/// built from a set that contains one of them.
class IdAudit {
public:
    explicit IdAudit(std::unordered_set<std::string> held_out) : held_out_(std::move(held_out)) {}

    void consult(const std::vector<TokenizedTweet>& used, std::string_view what) {
        for (const auto& t : used) {
            if (held_out_.contains(t.id)) {
                throw LeakageError("held-out record '" + t.id + "' was used to build the " + std::string(what));
            }
        }
        consulted_ += used.size();
    }

    std::size_t consulted() const noexcept { return consulted_; }

private:
    std::unordered_set<std::string> held_out_;
    std::size_t consulted_ = 0;
};

/// Test seams. `before_training` may edit a fold's training and dev sets
/// before anything is built from them.
struct ExperimentHooks {
    std::function<void(std::size_t fold, std::vector<TokenizedTweet>& train, std::vector<TokenizedTweet>& dev)>
        before_training;
};

// ---------------------------------------------------------------------------
// Driver

namespace detail {

struct FoldData {
    std::vector<TokenizedTweet> train, dev, test;
};

inline std::vector<Polarity> predict_fold(const ExperimentConfig& cfg, const ExperimentInputs& in, FoldData& data,
                                          std::size_t fold, IdAudit& audit) {
    std::vector<Polarity> out;
    if (!is_neural(cfg.model)) {
        audit.consult(data.train, "feature space");
        const auto space = build_feature_space(data.train, cfg.scheme);
        std::vector<SparseBinaryVector> docs;
        std::vector<Polarity> labels;
        for (const auto& t : data.train) {
            docs.push_back(vectorize(t, space));
            labels.push_back(t.label);
        }
        if (cfg.model == ClassifierKind::nb) {
            const auto m = train_nb(docs, labels, space.size(), cfg.alpha, cfg.nb_event);
            for (const auto& t : data.test) out.push_back(predict_nb(m, vectorize(t, space)));
        } else {
            const auto m = train_svm_ovo(docs, labels, space.size(), {cfg.c});
            for (const auto& t : data.test) out.push_back(predict_svm(m, vectorize(t, space)));
        }
        return out;
    }

    std::set<std::string> langs;
    for (const auto* set : {&data.train, &data.dev, &data.test}) {
        for (const auto& t : *set) langs.insert(t.lang);
    }
    auto ctx = make_context(cfg, in, langs);
    if (cfg.alignment == AlignmentMode::refit) {
        audit.consult(data.train, "pivot frequency ranks");
        const auto ranks = ranks_from_corpus(data.train, cfg.pivot);
        for (const auto& l : langs) {
            if (l == cfg.pivot) continue;
            const auto it = in.dictionaries.find(l);
            if (it == in.dictionaries.end()) throw ConfigError("no bilingual dictionary for language '" + l + "'");
            const PivotSelection sel{cfg.pivot_k, cfg.pivot_train, derive_seed(cfg.seed, 0xA119 + fold),
                                     PivotSide::target};
            auto tm = fit_pivot_alignment(ranks, it->second, ctx.table(l), ctx.table(cfg.pivot), sel);
            ctx.set_alignment(std::move(tm));
        }
    }
    audit.consult(data.train, "training set");
    audit.consult(data.dev, "early-stopping dev set");
    auto tc = cfg.train;
    tc.seed = derive_seed(cfg.seed, 0x7EA1 + fold);
    const auto model = nn::train(cfg.model == ClassifierKind::lstm ? nn::ModelKind::lstm : nn::ModelKind::cnn,
                                 data.train, data.dev, ctx, tc);
    for (const auto& p : nn::predict(model, data.test, ctx)) out.push_back(p.label);
    return out;
}

}  // namespace detail

/// k-fold cross-validation. Every fold builds its feature space, alignment
/// refit and early-stopping split from its own training part only. Folds
/// run on `cfg.threads` threads; results do not depend on the thread count.
inline CVReport run_experiment(const ExperimentConfig& cfg, const ExperimentInputs& in,
                               const ExperimentHooks& hooks = {}) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    const auto pool = scoped_tweets(cfg, in);
    if (pool.empty()) throw ConfigError("no tweets in scope '" + cfg.scope + "'");
    std::vector<TweetRecord> stubs;
    stubs.reserve(pool.size());
    for (const auto& t : pool) stubs.push_back({t.id, t.lang, {}, std::nullopt, t.label});
    const auto plan = make_folds(stubs, cfg.folds, cfg.seed, cfg.stratify);

    CVReport report;
    report.name = cfg.name;
    report.model = to_string(cfg.model);
    report.config_fingerprint = cfg.fingerprint();
    report.folds.resize(cfg.folds);

    auto run_fold = [&](std::size_t f) {
        const auto t0 = std::chrono::steady_clock::now();
        detail::FoldData data;
        std::unordered_set<std::string> held_out;
        std::vector<std::string> train_ids;
        for (const auto& t : pool) {
            if (plan.assignments.at(t.id) == f) {
                data.test.push_back(t);
                held_out.insert(t.id);
            } else {
                train_ids.push_back(t.id);
            }
        }
        std::unordered_set<std::string> dev_ids;
        if (is_neural(cfg.model)) {
            const auto split = split_dev(train_ids, cfg.dev_fraction, derive_seed(cfg.seed, 0xDE0 + f));
            dev_ids.insert(split.second.begin(), split.second.end());
        }
        for (const auto& t : pool) {
            if (held_out.contains(t.id)) continue;
            (dev_ids.contains(t.id) ? data.dev : data.train).push_back(t);
        }
        if (hooks.before_training) hooks.before_training(f, data.train, data.dev);
        IdAudit audit(std::move(held_out));
        const auto preds = detail::predict_fold(cfg, in, data, f, audit);

        FoldResult r;
        r.fold = f;
        r.size = data.test.size();
        for (std::size_t i = 0; i < data.test.size(); ++i) {
            auto& lt = r.by_language[data.test[i].lang];
            ++lt.total;
            if (preds[i] == data.test[i].label) {
                ++lt.correct;
                ++r.correct;
            }
        }
        r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.size);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.folds[f] = std::move(r);
    };

    const std::size_t workers = std::min(cfg.threads, cfg.folds);
    if (workers <= 1) {
        for (std::size_t f = 0; f < cfg.folds; ++f) run_fold(f);
    } else {
        std::vector<std::exception_ptr> errors(cfg.folds);
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool_threads;
        for (std::size_t w = 0; w < workers; ++w) {
            pool_threads.emplace_back([&] {
                for (std::size_t f; (f = next++) < cfg.folds;) {
                    try {
                        run_fold(f);
                    } catch (...) {
                        errors[f] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool_threads) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    double sum = 0.0;
    for (const auto& fr : report.folds) {
        sum += fr.accuracy;
        for (const auto& [l, t] : fr.by_language) {
            report.by_language[l].correct += t.correct;
            report.by_language[l].total += t.total;
        }
    }
    report.mean_accuracy = sum / static_cast<double>(report.folds.size());
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

inline CVReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    return run_experiment(cfg, load_experiment_inputs(cfg));
}

}  // namespace xlsent

#endif  // XLSENT_EVAL_HPP
