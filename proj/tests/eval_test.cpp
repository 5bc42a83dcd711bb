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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "xlsent/eval.hpp"
#include "xlsent/synthetic.hpp"

namespace xlsent {
namespace {

ExperimentInputs inputs_of(const synthetic::Fixture& fx, bool with_matrices = true) {
    ExperimentInputs in;
    in.tweets = fx.tweets;
    for (const auto& [l, t] : fx.tables) in.tables[l] = std::make_shared<const EmbeddingTable>(t);
    for (const auto& [l, d] : fx.dictionaries) {
        in.dictionaries[l] = d;
        if (with_matrices) {
            in.matrices.emplace(l, fit_pivot_alignment(fx.pivot_ranks, d, fx.tables.at(l), fx.tables.at(fx.pivot_lang),
                                                       {60, 48, 1, PivotSide::target}));
        }
    }
    return in;
}

synthetic::Fixture small_fixture(std::uint64_t seed, std::size_t per_lang = 20) {
    synthetic::TrilingualOptions o;
    o.seed = seed;
    o.dim = 12;
    o.tweets_per_lang = {per_lang, per_lang, per_lang};
    o.fillers = 60;
    o.markers_per_class = 10;
    return synthetic::trilingual(o);
}

ExperimentConfig quick_cnn() {
    ExperimentConfig c;
    c.folds = 3;
    c.dev_fraction = 0.2;
    c.train.filters = 4;
    c.train.max_epochs = 4;
    c.train.batch_size = 10;
    return c;
}

TEST(Config, ParsesKeyValueFile) {
    std::istringstream in(
        "# comment\n"
        "name = cnn-aligned\n"
        "model=cnn\n"
        "  folds = 5 \n"
        "\n"
        "alignment = translation_matrix\n"
        "matrix.ja = ja.tm\n"
        "embeddings.en = en.vec\n"
        "filters = 7\n"
        "seed = 42\n");
    const auto c = read_experiment_config(in);
    EXPECT_EQ(c.name, "cnn-aligned");
    EXPECT_EQ(c.folds, 5u);
    EXPECT_EQ(c.alignment, AlignmentMode::translation_matrix);
    EXPECT_EQ(c.matrices.at("ja"), "ja.tm");
    EXPECT_EQ(c.embeddings.at("en"), "en.vec");
    EXPECT_EQ(c.train.filters, 7u);
    EXPECT_EQ(c.seed, 42u);
}

TEST(Config, RejectsBadInput) {
    std::istringstream unknown("colour = blue\n");
    EXPECT_THROW(read_experiment_config(unknown), ConfigError);
    std::istringstream no_eq("folds 3\n");
    EXPECT_THROW(read_experiment_config(no_eq), ParseError);
    std::istringstream bad_value("folds = many\n");
    EXPECT_THROW(read_experiment_config(bad_value), ConfigError);
}

TEST(Config, OneFoldIsRejected) {
    ExperimentConfig c;
    c.folds = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    c.folds = 2;
    EXPECT_NO_THROW(c.validate());
    c.model = ClassifierKind::nb;
    c.alignment = AlignmentMode::translation_matrix;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, WriteReadRoundTripAndFingerprint) {
    ExperimentConfig c = quick_cnn();
    c.set("dictionary.zh", "zh.dict");
    c.set("windows", "2,3");
    std::stringstream io;
    write_experiment_config(io, c);
    const auto back = read_experiment_config(io);
    EXPECT_EQ(back.entries(), c.entries());
    EXPECT_EQ(back.fingerprint(), c.fingerprint());

    auto renamed = c;
    renamed.name = "other";
    renamed.threads = 4;
    EXPECT_EQ(renamed.fingerprint(), c.fingerprint());
    auto reseeded = c;
    reseeded.seed = 2;
    EXPECT_NE(reseeded.fingerprint(), c.fingerprint());
}

TEST(Experiment, FoldInvariantsHold) {
    const auto fx = small_fixture(1);
    ExperimentConfig c;
    c.model = ClassifierKind::nb;
    c.folds = 4;
    const auto r = run_experiment(c, inputs_of(fx));
    ASSERT_EQ(r.folds.size(), 4u);
    std::size_t total = 0;
    double sum = 0;
    for (const auto& f : r.folds) {
        std::size_t per_lang = 0;
        for (const auto& [l, t] : f.by_language) per_lang += t.total;
        EXPECT_EQ(per_lang, f.size);
        EXPECT_GE(f.accuracy, 0.0);
        EXPECT_LE(f.accuracy, 1.0);
        total += f.size;
        sum += f.accuracy;
    }
    EXPECT_EQ(total, fx.tweets.size());
    EXPECT_NEAR(r.mean_accuracy, sum / 4, 1e-12);
    std::size_t correct = 0, counted = 0;
    for (const auto& [l, t] : r.by_language) correct += t.correct, counted += t.total;
    std::size_t fold_correct = 0;
    for (const auto& f : r.folds) fold_correct += f.correct;
    EXPECT_EQ(counted, total);
    EXPECT_EQ(correct, fold_correct);
}

TEST(Experiment, RepeatedRunsAreIdentical) {
    const auto fx = small_fixture(2);
    const auto in = inputs_of(fx);
    auto c = quick_cnn();
    c.alignment = AlignmentMode::translation_matrix;
    const auto a = run_experiment(c, in);
    const auto b = run_experiment(c, in);
    EXPECT_EQ(a, b);
    c.threads = 3;
    EXPECT_EQ(run_experiment(c, in), a);
}

TEST(Experiment, LeakedTestIdIsCaught) {
    const auto fx = small_fixture(3);
    const auto in = inputs_of(fx);
    ExperimentHooks hooks;
    hooks.before_training = [&](std::size_t f, std::vector<TokenizedTweet>& train, std::vector<TokenizedTweet>&) {
        if (f != 1) return;
        // Re-add a tweet the pool sent to fold 1's test set.
        std::set<std::string> known;
        for (const auto& t : train) known.insert(t.id);
        for (const auto& t : fx.tweets) {
            if (!known.contains(t.id)) {
                train.push_back(t);
                break;
            }
        }
    };
    for (auto kind : {ClassifierKind::nb, ClassifierKind::svm, ClassifierKind::cnn}) {
        auto c = quick_cnn();
        c.model = kind;
        EXPECT_THROW(run_experiment(c, in, hooks), LeakageError) << to_string(kind);
    }
}

TEST(Experiment, CleanRunConsultsOnlyTrainingIds) {
    const auto fx = small_fixture(4);
    std::size_t calls = 0;
    ExperimentHooks hooks;
    hooks.before_training = [&](std::size_t, std::vector<TokenizedTweet>& train, std::vector<TokenizedTweet>& dev) {
        ++calls;
        EXPECT_FALSE(train.empty());
        EXPECT_FALSE(dev.empty());
    };
    auto c = quick_cnn();
    c.train.max_epochs = 1;
    EXPECT_NO_THROW(run_experiment(c, inputs_of(fx), hooks));
    EXPECT_EQ(calls, 3u);
}

TEST(Experiment, SixtyTweetAlignedCnnBeatsMajority) {
    const auto fx = small_fixture(5);
    ASSERT_EQ(fx.tweets.size(), 60u);
    auto c = quick_cnn();
    c.alignment = AlignmentMode::translation_matrix;
    c.train.filters = 10;
    c.train.max_epochs = 15;
    c.train.patience = 15;
    const auto r = run_experiment(c, inputs_of(fx));
    // Labels are balanced, so the majority class scores 1/3.
    EXPECT_GT(r.mean_accuracy, 1.0 / 3.0 + 0.1);
}

TEST(Experiment, MissingMatrixIsConfigError) {
    const auto fx = small_fixture(6);
    auto c = quick_cnn();
    c.alignment = AlignmentMode::translation_matrix;
    EXPECT_THROW(run_experiment(c, inputs_of(fx, false)), ConfigError);
}

TEST(Experiment, RefitModeFitsPerFold) {
    const auto fx = small_fixture(7);
    auto c = quick_cnn();
    c.alignment = AlignmentMode::refit;
    c.pivot_k = 30;
    c.pivot_train = 24;
    const auto r = run_experiment(c, inputs_of(fx, false));
    EXPECT_EQ(r.folds.size(), 3u);
    c.pivot_k = 5000;
    c.pivot_train = 10;
    EXPECT_THROW(run_experiment(c, inputs_of(fx, false)), CoverageError);
}

TEST(Experiment, SingleLanguageScope) {
    const auto fx = small_fixture(8, 30);
    ExperimentConfig c;
    c.model = ClassifierKind::svm;
    c.folds = 3;
    c.scope = "ja";
    const auto r = run_experiment(c, inputs_of(fx));
    ASSERT_EQ(r.by_language.size(), 1u);
    EXPECT_EQ(r.by_language.begin()->first, "ja");
    EXPECT_EQ(r.by_language.begin()->second.total, 30u);
    c.scope = "ko";
    EXPECT_THROW(run_experiment(c, inputs_of(fx)), ConfigError);
}

TEST(Experiment, RunsFromFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "xlsent_eval_files";
    std::filesystem::create_directories(dir);
    {
        std::ofstream corpus(dir / "corpus.tsv");
        const char* words[3] = {"great", "okay", "awful"};
        const char* labels[3] = {"positive", "neutral", "negative"};
        for (int i = 0; i < 30; ++i) {
            corpus << "t" << i << "\ten\t" << labels[i % 3] << "\t" << words[i % 3] << " day number " << i << "\n";
        }
    }
    std::ofstream(dir / "exp.cfg") << "name = files\ncorpus = " << (dir / "corpus.tsv").string()
                                   << "\ncorpus_format = tsv\nmodel = nb\nfolds = 3\n";
    const auto r = run_experiment(load_experiment_config((dir / "exp.cfg").string()));
    EXPECT_EQ(r.name, "files");
    EXPECT_DOUBLE_EQ(r.mean_accuracy, 1.0);
    std::filesystem::remove_all(dir);
}

CVReport fake(std::string name, double mean) {
    CVReport r;
    r.name = std::move(name);
    r.model = "cnn";
    r.mean_accuracy = mean;
    return r;
}

TEST(Compare, SingleReportHasNoDelta) {
    const auto c = compare_runs({fake("only", 0.5)});
    ASSERT_EQ(c.rows.size(), 1u);
    EXPECT_FALSE(c.rows[0].delta);
    std::ostringstream os;
    write_comparison_csv(os, c);
    EXPECT_EQ(os.str(), "config,model,accuracy\nonly,cnn,0.500000\n");
}

TEST(Compare, DeltaAgainstBaselineRow) {
    const auto c = compare_runs({fake("transformed", 0.587), fake("raw", 0.573)}, "raw");
    ASSERT_EQ(c.rows.size(), 2u);
    EXPECT_EQ(c.rows[0].name, "raw");
    EXPECT_NEAR(*c.rows[1].delta, 0.014, 1e-12);
    std::ostringstream os;
    write_comparison_text(os, c);
    EXPECT_NE(os.str().find("+0.014"), std::string::npos);
    EXPECT_THROW(compare_runs({fake("a", 0.1)}, "missing"), ArgumentError);
    EXPECT_THROW(compare_runs({}), ArgumentError);
}

TEST(Compare, IdenticalReportsGiveZeroDeltas) {
    const auto c = compare_runs({fake("b", 0.6), fake("a", 0.6), fake("c", 0.6)});
    EXPECT_EQ(c.rows[0].name, "a");
    for (const auto& r : c.rows) EXPECT_EQ(*r.delta, 0.0);
}

TEST(Report, CsvHasFoldRowsAndMean) {
    CVReport r = fake("x", 0.75);
    r.folds = {{0, 2, 1, 0.5, {{"en", {1, 2}}}, 0.0}, {1, 2, 2, 1.0, {{"en", {2, 2}}}, 0.0}};
    r.by_language = {{"en", {3, 4}}};
    std::ostringstream os;
    write_report_csv(os, r);
    EXPECT_EQ(os.str(),
              "fold,size,accuracy,seconds,en_n,en_accuracy\n"
              "0,2,0.500000,0.000000,2,0.500000\n"
              "1,2,1.000000,0.000000,2,1.000000\n"
              "mean,4,0.750000,0.000000,4,0.750000\n");
    auto timed = r;
    timed.seconds = 12.0;
    timed.folds[0].seconds = 3.0;
    EXPECT_EQ(timed, r);
}

}  // namespace
}  // namespace xlsent
