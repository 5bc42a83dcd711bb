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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "xlsent/preprocess.hpp"

namespace xlsent {
namespace {

const NormalizationRuleSet& rules() {
    static const auto r = NormalizationRuleSet::defaults();
    return r;
}

std::string norm(std::string_view s, const std::string& lang = "en") { return normalize(s, lang, rules()); }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

TEST(Normalize, EmojiBecomesHexToken) {
    EXPECT_EQ(norm("I ❤ it"), "i EMOJI_2764 it");
    EXPECT_EQ(norm("ok😀"), "ok EMOJI_1F600");
}

TEST(Normalize, EmptyIsIdentity) { EXPECT_EQ(norm(""), ""); }

TEST(Normalize, UrlAndEmoticon) {
    EXPECT_EQ(norm("see https://x.co :-)"), "see URL EMOTICON");
    EXPECT_EQ(norm("Go to WWW.Example.com/a?b=1 now"), "go to URL now");
}

TEST(Normalize, WesternEmoticons) {
    EXPECT_EQ(norm("great:)"), "great EMOTICON");
    EXPECT_EQ(norm(":D ;) :'( <3 ^_^ -_-"), "EMOTICON EMOTICON EMOTICON EMOTICON EMOTICON EMOTICON");
    EXPECT_EQ(norm("XD"), "EMOTICON");
}

TEST(Normalize, OrdinaryTextIsNotAnEmoticon) {
    EXPECT_EQ(norm("Windows XP at 10:30"), "windows xp at 10:30");
    EXPECT_EQ(norm("dorzo (see note)"), "dorzo (see note)");
}

TEST(Normalize, KaomojiIncludingNestedForm) {
    EXPECT_EQ(norm("(((o(*°▽°*)o)))", "ja"), "EMOTICON");
    EXPECT_EQ(norm("やった(^_^)v", "ja"), "やった EMOTICON v");
    EXPECT_EQ(norm("(´・ω・`)", "ja"), "EMOTICON");
    EXPECT_EQ(norm("(T_T)"), "EMOTICON");
    EXPECT_EQ(norm("(笑)", "ja"), "(笑)");
}

TEST(Normalize, LiteralList) {
    EXPECT_EQ(norm("orz"), "EMOTICON");
    EXPECT_EQ(norm("¯\\_(ツ)_/¯"), "EMOTICON");
}

TEST(Normalize, JapaneseWidthFolding) {
    EXPECT_EQ(norm("ＡＢＣ１２３", "ja"), "abc123");
    EXPECT_EQ(norm("ｶﾀｶﾅ", "ja"), "カタカナ");
    EXPECT_EQ(norm("いいね：）", "ja"), "いいね EMOTICON");
    // width folding is a Japanese rule only
    EXPECT_EQ(norm("１２３", "en"), "１２３");
}

TEST(Normalize, ChineseTraditionalToSimplified) {
    EXPECT_EQ(norm("這個蘋果很好", "zh"), "这个苹果很好");
    EXPECT_EQ(norm("這個", "en"), "這個");
}

TEST(Normalize, LatinLowercasedForEveryLanguage) {
    EXPECT_EQ(norm("iPhone ÉTÉ", "zh"), "iphone été");
    EXPECT_EQ(norm("iPhone", "ja"), "iphone");
}

TEST(Normalize, EmojiJoinersAndSelectorsAreDropped) {
    EXPECT_EQ(norm("👨\u200D👩"), "EMOJI_1F468 EMOJI_1F469");
    EXPECT_EQ(norm("❤\uFE0F"), "EMOJI_2764");
}

TEST(Normalize, ExistingReplacementTokensArePreserved) {
    EXPECT_EQ(norm("EMOJI_1F600 URL EMOTICON Url"), "EMOJI_1F600 URL EMOTICON url");
}

TEST(Normalize, InvalidUtf8IsReplacedNotRejected) {
    EXPECT_EQ(norm("a\xff"
                   "b"),
              "a\xEF\xBF\xBD"
              "b");
}

TEST(Normalize, UnknownLanguageIsConfigError) { EXPECT_THROW(norm("x", "fr"), ConfigError); }

const std::vector<std::pair<std::string, std::string>> kFixtures = {
    {"I ❤ it", "en"},
    {"see https://x.co :-)", "en"},
    {"RT @user: Putin's speech... :( #politics http://t.co/abc", "en"},
    {"(((o(*°▽°*)o)))今日はいい天気！！", "ja"},
    {"ｉＰｈｏｎｅ６ 買った(*´ω｀*)♪", "ja"},
    {"蘇格蘭獨立公投 😂😂 www.bbc.com", "zh"},
    {"Windows 8 is sooooo BAD :-/ xD", "en"},
    {"  spaced\t\tout\u3000text  ", "ja"},
};

TEST(Normalize, IdempotentOnFixtures) {
    for (const auto& [text, lang] : kFixtures) {
        const auto once = norm(text, lang);
        EXPECT_EQ(norm(once, lang), once) << text;
    }
}

// Random strings assembled from fragments that stress pattern boundaries.
TEST(Normalize, IdempotentOnRandomFragmentStrings) {
    const std::vector<std::string> frags = {
        ":", ")", "(", "-", "^", "_", "o", "x", "D", "3", "<", "/", " ", "a", "Z", "1", "http://a.b",
        "www.", "❤", "\uFE0F", "\u200D", "😀", "。", "（", "）", "＾", "ω", "´", "・", "ｶ", "ﾞ", "Ａ", "這",
        "EMOJI_2764", "URL", "EMOTICON", "\u3000", "T", ";", "=", "*", "°", "▽", "orz", "¯\\_(ツ)_/¯"};
    Rng rng(7);
    for (int trial = 0; trial < 3000; ++trial) {
        std::string s;
        const auto n = 1 + rng.below(12);
        for (std::uint64_t i = 0; i < n; ++i) s += frags[rng.below(frags.size())];
        for (const char* lang : {"en", "ja", "zh"}) {
            const auto once = norm(s, lang);
            ASSERT_EQ(norm(once, lang), once) << "input: " << s << " lang: " << lang;
        }
    }
}

TEST(Normalize, ReplacementTokensNeverSplitAcrossTokens) {
    Rng rng(8);
    const std::vector<std::string> frags = {"a", "😀", ":)", "https://q.z", " ", "b", "(^^)", "❤", "x"};
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        for (int i = 0; i < 8; ++i) s += frags[rng.below(frags.size())];
        for (const auto& tok : split_whitespace(norm(s))) {
            const bool has_reserved_fragment = tok.find("EMOJI_") != std::string::npos ||
                                               tok.find("EMOTICON") != std::string::npos ||
                                               tok.find("URL") != std::string::npos;
            if (has_reserved_fragment) {
                EXPECT_TRUE(tok == "URL" || tok == "EMOTICON" || tok.rfind("EMOJI_", 0) == 0) << tok;
            }
        }
    }
}

TEST(Tokenize, WhitespaceRunsSplit) {
    EXPECT_EQ(tokenize("a  b", TokenizeMode::whitespace), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(tokenize("今日\u3000は", TokenizeMode::whitespace), (std::vector<std::string>{"今日", "は"}));
    EXPECT_TRUE(tokenize("   ", TokenizeMode::whitespace).empty());
}

TEST(Tokenize, PretokenizedPassesThrough) {
    const std::vector<std::string> toks = {"今日", "は", "いい"};
    EXPECT_EQ(tokenize("", TokenizeMode::pretokenized, toks), toks);
    EXPECT_THROW(tokenize("x", TokenizeMode::pretokenized), ConfigError);
}

TEST(Tokenize, NormalizedFixtureTokenCount) {
    // hand count: rt | @user: | putin's | speech... | EMOTICON | #politics | URL
    const auto toks = tokenize(norm(kFixtures[2].first), TokenizeMode::whitespace);
    EXPECT_EQ(toks.size(), 7u);
    EXPECT_EQ(toks[4], "EMOTICON");
    EXPECT_EQ(toks[6], "URL");
}

TEST(PreprocessRecord, SingleEmoji) {
    const TweetRecord r{"e1", "en", "❤", std::nullopt, Polarity::positive};
    const auto t = preprocess_record(r, rules(), TokenizeMode::whitespace);
    EXPECT_EQ(t.tokens, std::vector<std::string>{"EMOJI_2764"});
    EXPECT_EQ(t.length(), 1u);
    EXPECT_EQ(t.label, Polarity::positive);
}

TEST(PreprocessRecord, WhitespaceOnlyIsDropped) {
    const TweetRecord r{"w1", "en", " \t ", std::nullopt, Polarity::neutral};
    try {
        preprocess_record(r, rules(), TokenizeMode::whitespace);
        FAIL() << "expected DropError";
    } catch (const DropError& e) {
        EXPECT_EQ(e.record_id(), "w1");
    }
}

TEST(PreprocessRecord, ThreeRecordFixture) {
    const std::vector<TweetRecord> recs = {
        {"1", "en", "Loving my new iPhone 6 ❤ http://apple.com", std::nullopt, Polarity::positive},
        {"2", "ja", "", std::vector<std::string>{"今日", "は", "ＯＫ", ":)"}, Polarity::neutral},
        {"3", "zh", "普京 講話 太 長 了 :-(", std::nullopt, Polarity::negative},
    };
    const auto out = preprocess_corpus(recs, rules(), TokenizeMode::whitespace);
    // pretokenized record has no text, so whitespace mode drops it
    ASSERT_EQ(out.tweets.size(), 2u);
    EXPECT_EQ(out.dropped_ids, std::vector<std::string>{"2"});
    EXPECT_EQ(out.tweets[0].tokens,
              (std::vector<std::string>{"loving", "my", "new", "iphone", "6", "EMOJI_2764", "URL"}));
    EXPECT_EQ(out.tweets[1].tokens, (std::vector<std::string>{"普京", "讲话", "太", "长", "了", "EMOTICON"}));

    const auto pre = preprocess_record(recs[1], rules(), TokenizeMode::pretokenized);
    EXPECT_EQ(pre.tokens, (std::vector<std::string>{"今日", "は", "ok", "EMOTICON"}));
}

TEST(RuleSet, ValidateChecksPoliciesAndTokens) {
    auto r = NormalizationRuleSet::defaults();
    EXPECT_NO_THROW(r.validate(default_languages()));
    EXPECT_THROW(r.validate({"en", "ko"}), ConfigError);
    r.url_token = "A URL";
    EXPECT_THROW(r.validate({"en"}), ConfigError);
}

TEST(RuleSet, FingerprintTracksPatternVersion) {
    const auto a = NormalizationRuleSet::defaults();
    auto b = a;
    b.emoticons = EmoticonPatterns::parse("@version 2\n:\\)\n");
    EXPECT_NE(a.fingerprint(), b.fingerprint());
}

TEST(PatternFile, ShippedFileMatchesEmbeddedCopy) {
    EXPECT_EQ(read_file(std::string(XLSENT_DATA_DIR) + "/emoticons_v1.txt"), detail::kEmoticonsV1);
    const auto loaded = EmoticonPatterns::load(std::string(XLSENT_DATA_DIR) + "/emoticons_v1.txt");
    EXPECT_EQ(loaded->version(), 1);
    EXPECT_EQ(loaded->patterns(), EmoticonPatterns::builtin()->patterns());
    EXPECT_FALSE(loaded->literals().empty());
}

TEST(PatternFile, BadPatternReportsLine) {
    try {
        EmoticonPatterns::parse("# comment\n:\\)\n([unclosed\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(ZhTable, ShippedTableMatchesEmbeddedAndHasNoChains) {
    const auto file = CharMap::load(std::string(XLSENT_DATA_DIR) + "/zh_t2s.tsv");
    const auto& builtin = *CharMap::builtin_zh_t2s();
    EXPECT_EQ(file->table(), builtin.table());
    EXPECT_EQ(file->version(), builtin.version());
    for (const auto& [from, to] : builtin.table()) {
        EXPECT_FALSE(builtin.table().contains(to)) << std::hex << static_cast<unsigned>(from);
    }
}

TEST(ZhTable, ParsesUPlusPrefixAndRejectsGarbage) {
    const auto m = CharMap::parse("# version: 3\nU+9019\tU+8FD9\n");
    EXPECT_EQ((*m)(0x9019), 0x8FD9u);
    EXPECT_EQ(m->version(), 3);
    EXPECT_THROW(CharMap::parse("zz\t41\n"), ParseError);
}

}  // namespace
}  // namespace xlsent
