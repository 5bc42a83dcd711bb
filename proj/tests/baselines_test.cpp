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
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "support/baseline_oracles.hpp"
#include "xlsent/baselines.hpp"
#include "xlsent/rng.hpp"

namespace xlsent {
namespace {

using namespace xlsent::testing;

const std::string J(kBigramJoiner);
const std::string S(kLanguageSeparator);

TokenizedTweet tw(std::string lang, std::vector<std::string> toks, Polarity p = Polarity::neutral) {
    return {"t", std::move(lang), p, std::move(toks)};
}

std::vector<TokenizedTweet> three_tweets() {
    return {tw("en", {"a", "b", "a"}), tw("en", {"b", "c"}), tw("zh", {"a"})};
}

TEST(Features, TwoTokensGiveThreeColumns) {
    const auto fs = build_feature_space({tw("en", {"a", "b"})}, FeatureScheme::per_language);
    EXPECT_EQ(fs.size(), 3u);
    EXPECT_TRUE(fs.find("a" + J + "b"));
}

TEST(Features, HandCountOnThreeTweets) {
    // untagged: a b c a|b b|a b|c; tagged adds zh:a as its own column
    EXPECT_EQ(build_feature_space(three_tweets(), FeatureScheme::per_language).size(), 6u);
    const auto cum = build_feature_space(three_tweets(), FeatureScheme::cumulative);
    EXPECT_EQ(cum.size(), 7u);
    EXPECT_NE(cum.find("en" + S + "a"), cum.find("zh" + S + "a"));
}

TEST(Features, CumulativeIsSumOfPerLanguageSpaces) {
    Rng rng(1);
    std::vector<TokenizedTweet> all;
    std::map<std::string, std::vector<TokenizedTweet>> by_lang;
    for (int i = 0; i < 60; ++i) {
        const std::string lang = i % 3 == 0 ? "en" : i % 3 == 1 ? "ja" : "zh";
        std::vector<std::string> toks;
        for (std::size_t k = 0, n = 1 + rng.below(6); k < n; ++k) toks.push_back("w" + std::to_string(rng.below(15)));
        all.push_back(tw(lang, toks));
        by_lang[lang].push_back(all.back());
    }
    std::size_t sum = 0;
    for (const auto& [l, ts] : by_lang) sum += build_feature_space(ts, FeatureScheme::per_language).size();
    EXPECT_EQ(build_feature_space(all, FeatureScheme::cumulative).size(), sum);
}

TEST(Features, VectorizeHandMapping) {
    const auto fs = build_feature_space(three_tweets(), FeatureScheme::cumulative);
    // ids in first-seen order: a=0 a|b=1 b=2 b|a=3 b|c=4 c=5 zh:a=6
    EXPECT_EQ(*fs.find("en" + S + "b" + J + "c"), 4u);
    EXPECT_EQ(vectorize(tw("en", {"c", "b", "zz"}), fs).ids, (std::vector<std::uint32_t>{2, 5}));
    EXPECT_EQ(vectorize(tw("zh", {"a", "a"}), fs).ids, (std::vector<std::uint32_t>{6}));
    EXPECT_TRUE(vectorize(tw("ja", {"a"}), fs).ids.empty());
}

TEST(Features, VectorizeIsBinaryAndIdempotent) {
    const auto fs = build_feature_space(three_tweets(), FeatureScheme::per_language);
    const auto v = vectorize(tw("xx", {"a", "b", "a", "b"}), fs);
    // a, b, a|b, b|a each once
    EXPECT_EQ(v.ids.size(), 4u);
    EXPECT_TRUE(std::is_sorted(v.ids.begin(), v.ids.end()));
    EXPECT_EQ(v, vectorize(tw("xx", {"a", "b", "a", "b"}), fs));
    EXPECT_TRUE(vectorize(tw("en", {"q", "r"}), fs).ids.empty());
}

TEST(Features, DumpListsEveryColumn) {
    std::ostringstream os;
    write_feature_space(os, build_feature_space({tw("en", {"a", "b"})}, FeatureScheme::per_language));
    EXPECT_EQ(os.str(), "# xlsent-features 1 scheme=per_language size=3\n0\ta\n1\ta" + J + "b\n2\tb\n");
}

TEST(NaiveBayes, MultinomialPosteriorMatchesHandTable) {
    const NbToy toy;
    const auto m = train_nb(toy.docs, toy.labels, 2);
    const auto table = nb_hand_table();
    for (const auto& row : table) {
        const auto post = nb_posterior(m, row.x);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(post[k], row.posterior[k], 1e-15);
    }
    EXPECT_NEAR(nb_scores(m, {{0, 1}})[0], std::log(0.5 * 3 / 5 * 2 / 5), 1e-15);
    EXPECT_EQ(predict_nb(m, {{0, 1}}), Polarity::positive);
    EXPECT_EQ(predict_nb(m, {{1}}), Polarity::positive);
}

TEST(NaiveBayes, BernoulliModelsAbsences) {
    const NbToy toy;
    const auto m = train_nb(toy.docs, toy.labels, 2, 1.0, NbEvent::bernoulli);
    // P(f|pos) = (3/4, 1/2), P(f|neu) = (2/3, 1/3), P(f|neg) = (1/3, 2/3)
    const double pos = 0.5 * 0.75 * 0.5, neu = 0.25 * 2.0 / 3 * 2.0 / 3, neg = 0.25 / 3 / 3;
    const auto post = nb_posterior(m, {{0}});
    EXPECT_NEAR(post[0], pos / (pos + neu + neg), 1e-15);
    EXPECT_NEAR(post[1], neu / (pos + neu + neg), 1e-15);
    EXPECT_NEAR(post[2], neg / (pos + neu + neg), 1e-15);
}

TEST(NaiveBayes, TiesGoToLowestCode) {
    const auto m = train_nb({{{0}}, {{0}}}, {Polarity::negative, Polarity::neutral}, 1);
    EXPECT_EQ(predict_nb(m, {{0}}), Polarity::neutral);
}

TEST(NaiveBayes, SingleClassAlwaysPredicted) {
    const auto m = train_nb({{{0}}, {{1}}}, {Polarity::negative, Polarity::negative}, 3);
    for (const SparseBinaryVector& x : {SparseBinaryVector{}, SparseBinaryVector{{0}}, SparseBinaryVector{{1, 2}}}) {
        EXPECT_EQ(predict_nb(m, x), Polarity::negative);
    }
}

TEST(NaiveBayes, OrderAndDuplicationInvariant) {
    Rng rng(2);
    std::vector<SparseBinaryVector> docs;
    std::vector<Polarity> labels;
    for (int i = 0; i < 40; ++i) {
        SparseBinaryVector v;
        for (std::uint32_t f = 0; f < 12; ++f) {
            if (rng.uniform() < 0.3) v.ids.push_back(f);
        }
        docs.push_back(v);
        labels.push_back(polarity_from_code(static_cast<int>(rng.below(3))));
    }
    const auto base = train_nb(docs, labels, 12);
    auto rdocs = docs;
    auto rlabels = labels;
    std::reverse(rdocs.begin(), rdocs.end());
    std::reverse(rlabels.begin(), rlabels.end());
    const auto rev = train_nb(rdocs, rlabels, 12);
    EXPECT_EQ(rev.log_like, base.log_like);
    EXPECT_EQ(rev.log_prior, base.log_prior);

    auto tdocs = docs;
    auto tlabels = labels;
    for (int r = 0; r < 2; ++r) {
        tdocs.insert(tdocs.end(), docs.begin(), docs.end());
        tlabels.insert(tlabels.end(), labels.begin(), labels.end());
    }
    // alpha scales with the duplication so the smoothed estimates are unchanged
    const auto tripled = train_nb(tdocs, tlabels, 12, 3.0);
    for (const auto& x : docs) EXPECT_EQ(predict_nb(tripled, x), predict_nb(base, x));
}

TEST(NaiveBayes, EmptyTrainingSetThrows) {
    EXPECT_THROW(train_nb({}, {}, 2), ArgumentError);
    EXPECT_THROW(train_nb({{{0}}}, {Polarity::positive}, 2, 0.0), ArgumentError);
}

TEST(Svm, MatchesBruteForcePrimalOracle) {
    const SixPoints s;
    for (double C : {0.1, 1.0, 5.0}) {
        const auto m = train_binary_svm(s.rows(), s.y, 2, {C});
        ASSERT_TRUE(m.converged);
        const Eigen::Vector3d oracle = brute_force_svm(s, C);
        ASSERT_GT(oracle.norm(), 0.1);
        EXPECT_NEAR(m.w[0], oracle[0], 1e-3) << "C=" << C;
        EXPECT_NEAR(m.w[1], oracle[1], 1e-3) << "C=" << C;
        EXPECT_NEAR(m.b, oracle[2], 1e-3) << "C=" << C;
        // Strong duality: the last dual value meets the primal optimum.
        EXPECT_NEAR(m.dual_history.back(), primal(s, oracle, C), 1e-3);
    }
}

TEST(Svm, DualObjectiveNeverDecreases) {
    Rng rng(3);
    std::vector<SparseRow> rows;
    std::vector<int> y;
    for (int i = 0; i < 80; ++i) {
        SparseRow r;
        for (std::uint32_t f = 0; f < 20; ++f) {
            if (rng.uniform() < 0.25) r.idx.push_back(f), r.val.push_back(1.0);
        }
        rows.push_back(r);
        y.push_back(rng.uniform() < 0.5 ? 1 : -1);
    }
    const auto m = train_binary_svm(rows, y, 20, {1.0});
    ASSERT_GT(m.dual_history.size(), 2u);
    for (std::size_t i = 1; i < m.dual_history.size(); ++i) {
        EXPECT_GE(m.dual_history[i], m.dual_history[i - 1] - 1e-12);
    }
}

// Class k owns features 3k..3k+2; every document holds one or two of them.
std::pair<std::vector<SparseBinaryVector>, std::vector<Polarity>> separable_docs() {
    std::vector<SparseBinaryVector> docs;
    std::vector<Polarity> labels;
    for (std::uint32_t k = 0; k < 3; ++k) {
        for (std::uint32_t a = 0; a < 3; ++a) {
            docs.push_back({{3 * k + a}});
            labels.push_back(polarity_from_code(static_cast<int>(k)));
            docs.push_back({{3 * k + a, 3 * k + (a + 1) % 3}});
            std::sort(docs.back().ids.begin(), docs.back().ids.end());
            labels.push_back(polarity_from_code(static_cast<int>(k)));
        }
    }
    return {docs, labels};
}

TEST(Svm, SeparableDataIsFitPerfectlyForAnyC) {
    const auto [docs, labels] = separable_docs();
    const auto a = train_svm_ovo(docs, labels, 9, {1.0});
    const auto b = train_svm_ovo(docs, labels, 9, {10.0});
    for (std::size_t i = 0; i < docs.size(); ++i) {
        EXPECT_EQ(predict_svm(a, docs[i]), labels[i]);
        EXPECT_EQ(predict_svm(b, docs[i]), predict_svm(a, docs[i]));
    }
}

TEST(Svm, MissingClassIsNamed) {
    try {
        train_svm_ovo({{{0}}, {{1}}}, {Polarity::positive, Polarity::negative}, 2);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("neutral"), std::string::npos);
    }
}

TEST(Svm, ThreeWayVoteTieGoesToLowestCode) {
    SvmOvoModel m;
    m.dim = 1;
    for (auto& p : m.pairs) p.w = {0.0};
    // (0,1) -> 0, (0,2) -> 2, (1,2) -> 1
    m.pairs[0].b = 1.0;
    m.pairs[1].b = -1.0;
    m.pairs[2].b = 1.0;
    EXPECT_EQ(predict_svm(m, {}), Polarity::positive);
}

TEST(Svm, BadArgumentsThrow) {
    EXPECT_THROW(train_binary_svm({}, {}, 1), ArgumentError);
    EXPECT_THROW(train_binary_svm({{{0}, {1.0}}}, {2}, 1), ArgumentError);
    EXPECT_THROW(train_binary_svm({{{0}, {1.0}}}, {1}, 1, {0.0}), ArgumentError);
}

TEST(Svm, DumpHasOneBlockPerPair) {
    const auto [docs, labels] = separable_docs();
    std::ostringstream os;
    write_svm_model(os, train_svm_ovo(docs, labels, 9));
    const auto s = os.str();
    EXPECT_EQ(s.rfind("# xlsent-svm-ovo 1 dim=9\n", 0), 0u);
    EXPECT_NE(s.find("pair 0 1 bias"), std::string::npos);
    EXPECT_NE(s.find("pair 1 2 bias"), std::string::npos);
}

}  // namespace
}  // namespace xlsent
