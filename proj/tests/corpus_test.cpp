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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "xlsent/corpus.hpp"

namespace xlsent {
namespace {

std::vector<TweetRecord> read_jsonl(const std::string& text) {
    std::istringstream in(text);
    return read_corpus(in, CorpusFormat::jsonl);
}

std::vector<TweetRecord> synthetic_records(std::size_t per_label) {
    std::vector<TweetRecord> out;
    for (std::size_t i = 0; i < per_label * 3; ++i) {
        out.push_back({"r" + std::to_string(i), "en", "x", std::nullopt, kAllPolarities[i % 3]});
    }
    return out;
}

TEST(LoadCorpus, EmptyInputGivesNoRecords) {
    EXPECT_TRUE(read_jsonl("").empty());
}

TEST(LoadCorpus, ThreeLabelsMapToStableCodes) {
    const auto recs = read_jsonl(
        R"({"id":"a","lang":"en","text":"good","label":"pos"})"
        "\n"
        R"({"id":"b","lang":"ja","text":"普通","label":"neu"})"
        "\n"
        R"({"id":"c","lang":"zh","tokens":["很","差"],"label":"neg"})"
        "\n");
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(code(recs[0].label), 0);
    EXPECT_EQ(code(recs[1].label), 1);
    EXPECT_EQ(code(recs[2].label), 2);
    EXPECT_EQ(recs[1].lang, "ja");
    ASSERT_TRUE(recs[2].tokens.has_value());
    EXPECT_EQ(recs[2].tokens->size(), 2u);
}

TEST(LoadCorpus, LabelAliasesAreCaseInsensitive) {
    for (const char* s : {"Positive", "POS", "0"}) EXPECT_EQ(parse_polarity(s), Polarity::positive);
    for (const char* s : {"NEUTRAL", "Neu", "1"}) EXPECT_EQ(parse_polarity(s), Polarity::neutral);
    for (const char* s : {"negative", "NeG", "2"}) EXPECT_EQ(parse_polarity(s), Polarity::negative);
    EXPECT_FALSE(parse_polarity("happy").has_value());
}

TEST(LoadCorpus, UnknownLabelIsSchemaErrorOnLine1) {
    try {
        read_jsonl(R"({"id":"a","lang":"en","text":"x","label":"happy"})");
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(LoadCorpus, MalformedLineReportsLineNumber) {
    try {
        read_jsonl(R"({"id":"a","lang":"en","text":"x","label":"pos"})"
                   "\n{not json\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(LoadCorpus, UnknownLanguageAndEmptyRecordAreSchemaErrors) {
    EXPECT_THROW(read_jsonl(R"({"id":"a","lang":"fr","text":"x","label":"pos"})"), SchemaError);
    EXPECT_THROW(read_jsonl(R"({"id":"a","lang":"en","text":"","label":"pos"})"), SchemaError);
    EXPECT_THROW(read_jsonl(R"({"id":"a","lang":"en","tokens":[],"label":"pos"})"), SchemaError);
}

TEST(LoadCorpus, TsvKeepsTabsInsideText) {
    std::istringstream in("id\tlang\tlabel\ttext\n7\ten\tneg\tbad\tday\n");
    const auto recs = read_corpus(in, CorpusFormat::tsv);
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].id, "7");
    EXPECT_EQ(recs[0].label, Polarity::negative);
    EXPECT_EQ(recs[0].text, "bad\tday");
}

TEST(LoadCorpus, TsvMissingColumnsIsParseError) {
    std::istringstream in("1\ten\tpos\n");
    EXPECT_THROW(read_corpus(in, CorpusFormat::tsv), ParseError);
}

TEST(MakeFolds, TenRecordsTenFoldsGivesSingletons) {
    const auto recs = synthetic_records(4);
    std::vector<TweetRecord> ten(recs.begin(), recs.begin() + 10);
    const auto plan = make_folds(ten, 10, 3, false);
    for (auto s : plan.fold_sizes()) EXPECT_EQ(s, 1u);
}

TEST(MakeFolds, StratifiedThirtyRecordsGiveOneOfEachLabelPerFold) {
    const auto recs = synthetic_records(10);
    const auto plan = make_folds(recs, 10, 99, true);
    // brute-force count of every (fold, label) cell
    std::vector<std::array<int, 3>> counts(10, {0, 0, 0});
    for (const auto& r : recs) ++counts[plan.assignments.at(r.id)][code(r.label)];
    for (const auto& c : counts) {
        EXPECT_EQ(c[0], 1);
        EXPECT_EQ(c[1], 1);
        EXPECT_EQ(c[2], 1);
    }
}

TEST(MakeFolds, SameSeedIsByteIdentical) {
    const auto recs = synthetic_records(7);
    EXPECT_EQ(make_folds(recs, 4, 11).to_tsv(), make_folds(recs, 4, 11).to_tsv());
    EXPECT_NE(make_folds(recs, 4, 11).to_tsv(), make_folds(recs, 4, 12).to_tsv());
}

TEST(MakeFolds, RejectsBadArguments) {
    const auto recs = synthetic_records(1);
    EXPECT_THROW(make_folds(recs, 4, 1), ArgumentError);
    EXPECT_THROW(make_folds(recs, 0, 1), ArgumentError);
    auto dup = recs;
    dup[1].id = dup[0].id;
    EXPECT_THROW(make_folds(dup, 2, 1), ArgumentError);
}

// Partition and balance invariants over random corpora.
TEST(MakeFolds, PartitionInvariantsHoldOnRandomCorpora) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(60);
        std::vector<TweetRecord> recs;
        for (std::size_t i = 0; i < n; ++i) {
            recs.push_back({"id" + std::to_string(i), "en", "t", std::nullopt,
                            kAllPolarities[rng.below(3)]});
        }
        const std::size_t k = 1 + rng.below(n);
        const bool stratify = rng.below(2) == 1;
        const auto plan = make_folds(recs, k, rng(), stratify);

        ASSERT_EQ(plan.assignments.size(), n);
        const auto sizes = plan.fold_sizes();
        const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
        EXPECT_LE(*hi - *lo, 1u);

        std::set<std::string> seen;
        for (std::size_t f = 0; f < k; ++f) {
            for (const auto& id : plan.fold_ids(f, recs)) EXPECT_TRUE(seen.insert(id).second);
        }
        EXPECT_EQ(seen.size(), n);

        if (stratify) {
            for (Polarity p : kAllPolarities) {
                const auto total = std::count_if(recs.begin(), recs.end(), [&](const auto& r) { return r.label == p; });
                const double share = static_cast<double>(total) / static_cast<double>(k);
                for (std::size_t f = 0; f < k; ++f) {
                    const auto in_fold = std::count_if(recs.begin(), recs.end(), [&](const auto& r) {
                        return r.label == p && plan.assignments.at(r.id) == f;
                    });
                    EXPECT_LE(std::abs(static_cast<double>(in_fold) - share), 1.0);
                }
            }
        }
    }
}

std::vector<std::string> make_ids(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("t" + std::to_string(i));
    return ids;
}

TEST(SplitDev, TenPercentOfHundred) {
    const auto [train, dev] = split_dev(make_ids(100), 0.10, 5);
    EXPECT_EQ(train.size(), 90u);
    EXPECT_EQ(dev.size(), 10u);
}

TEST(SplitDev, TenPercentOfTenRoundsToOne) {
    const auto [train, dev] = split_dev(make_ids(10), 0.10, 5);
    EXPECT_EQ(train.size(), 9u);
    EXPECT_EQ(dev.size(), 1u);
}

TEST(SplitDev, DeterministicDisjointAndCovering) {
    const auto ids = make_ids(37);
    const auto a = split_dev(ids, 0.2, 77);
    const auto b = split_dev(ids, 0.2, 77);
    EXPECT_EQ(a, b);
    std::set<std::string> all(a.first.begin(), a.first.end());
    for (const auto& id : a.second) EXPECT_TRUE(all.insert(id).second);
    EXPECT_EQ(all, std::set<std::string>(ids.begin(), ids.end()));
    EXPECT_EQ(a.second.size(), 7u);
}

TEST(SplitDev, RejectsEmptyAndTooSmall) {
    EXPECT_THROW(split_dev({}, 0.1, 1), ArgumentError);
    EXPECT_THROW(split_dev(make_ids(5), 0.1, 1), ArgumentError);
    EXPECT_THROW(split_dev(make_ids(5), 1.0, 1), ArgumentError);
}

}  // namespace
}  // namespace xlsent
