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

#ifndef XLSENT_PREPROCESS_HPP
#define XLSENT_PREPROCESS_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/regex.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>

#include <json.hpp>

#include "xlsent/corpus.hpp"
#include "xlsent/detail/emoticons_v1.hpp"
#include "xlsent/detail/zh_t2s_table.hpp"
#include "xlsent/error.hpp"

namespace xlsent {

// ---------------------------------------------------------------------------
// UTF-8 helpers

namespace utf8 {

/// Decode UTF-8; malformed sequences become U+FFFD so decoding is total.
inline std::u32string decode(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const unsigned char b = p[i];
        char32_t cp;
        std::size_t len;
        if (b < 0x80) {
            cp = b;
            len = 1;
        } else if ((b & 0xE0) == 0xC0) {
            cp = b & 0x1F;
            len = 2;
        } else if ((b & 0xF0) == 0xE0) {
            cp = b & 0x0F;
            len = 3;
        } else if ((b & 0xF8) == 0xF0) {
            cp = b & 0x07;
            len = 4;
        } else {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back(0xFFFD);
            break;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            if ((p[i + k] & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (p[i + k] & 0x3F);
        }
        static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
        if (!ok || cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t c : s) append(out, c);
    return out;
}

}  // namespace utf8

/// Unicode White_Space property.
inline bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

// ---------------------------------------------------------------------------
// Emoji ranges
//
// A codepoint is an emoji when it falls in one of these inclusive ranges:
//   U+231A-231B  U+23E9-23F3  U+23F8-23FA  U+24C2  U+25AA-25AB  U+25B6
//   U+25C0  U+25FB-25FE  U+2600-27BF  U+2934-2935  U+2B05-2B07
//   U+2B1B-2B1C  U+2B50  U+2B55  U+3030  U+303D  U+3297  U+3299
//   U+1F000-1FAFF
// Emoji joiners and presentation selectors (U+200D, U+20E3, U+FE0E, U+FE0F)
// are removed, so each emoji codepoint becomes its own token.

inline constexpr std::pair<char32_t, char32_t> kEmojiRanges[] = {
    {0x231A, 0x231B}, {0x23E9, 0x23F3}, {0x23F8, 0x23FA}, {0x24C2, 0x24C2},
    {0x25AA, 0x25AB}, {0x25B6, 0x25B6}, {0x25C0, 0x25C0}, {0x25FB, 0x25FE},
    {0x2600, 0x27BF}, {0x2934, 0x2935}, {0x2B05, 0x2B07}, {0x2B1B, 0x2B1C},
    {0x2B50, 0x2B50}, {0x2B55, 0x2B55}, {0x3030, 0x3030}, {0x303D, 0x303D},
    {0x3297, 0x3297}, {0x3299, 0x3299}, {0x1F000, 0x1FAFF},
};

constexpr bool is_emoji(char32_t c) noexcept {
    for (const auto& [lo, hi] : kEmojiRanges) {
        if (c >= lo && c <= hi) return true;
    }
    return false;
}

constexpr bool is_emoji_modifier_glue(char32_t c) noexcept {
    return c == 0x200D || c == 0x20E3 || c == 0xFE0E || c == 0xFE0F;
}

// ---------------------------------------------------------------------------
// Emoticon pattern set

/// A compiled, versioned set of emoticon patterns.
///
/// File format: one ICU regular expression per line; blank lines and lines
/// starting with `#` are ignored; `@version N` sets the version and
/// `@literal TEXT` adds an exact string. All patterns are combined into one
/// ordered alternation and matched case-insensitively.
class EmoticonPatterns {
public:
    static std::shared_ptr<const EmoticonPatterns> parse(std::string_view source) {
        auto set = std::shared_ptr<EmoticonPatterns>(new EmoticonPatterns());
        std::istringstream in{std::string(source)};
        std::string line;
        std::size_t lineno = 0;
        std::vector<std::string> literal_alts;
        std::vector<std::string> alternatives;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            if (line.rfind("@version ", 0) == 0) {
                try {
                    set->version_ = std::stoi(line.substr(9));
                } catch (const std::exception&) {
                    throw ParseError("bad @version directive", lineno);
                }
                continue;
            }
            if (line.rfind("@literal ", 0) == 0) {
                const std::string lit = line.substr(9);
                set->literals_.push_back(lit);
                literal_alts.push_back(literal_pattern(lit));
                continue;
            }
            set->patterns_.push_back(line);
            // each pattern must compile on its own, so errors carry a line number
            UParseError perr;
            UErrorCode status = U_ZERO_ERROR;
            std::unique_ptr<icu::RegexPattern> probe(icu::RegexPattern::compile(
                icu::UnicodeString::fromUTF8(line), UREGEX_CASE_INSENSITIVE, perr, status));
            if (U_FAILURE(status)) {
                throw ParseError(std::string("invalid emoticon pattern: ") + u_errorName(status), lineno);
            }
            alternatives.push_back(line);
        }
        // literals are more specific than the generic patterns, so they go first
        alternatives.insert(alternatives.begin(), literal_alts.begin(), literal_alts.end());
        if (alternatives.empty()) throw ParseError("emoticon pattern set is empty", 0);
        std::string combined;
        for (const auto& a : alternatives) {
            if (!combined.empty()) combined += '|';
            combined += "(?:" + a + ")";
        }
        UParseError perr;
        UErrorCode status = U_ZERO_ERROR;
        set->regex_.reset(icu::RegexPattern::compile(icu::UnicodeString::fromUTF8(combined),
                                                     UREGEX_CASE_INSENSITIVE, perr, status));
        if (U_FAILURE(status)) throw ParseError("cannot compile emoticon pattern set", 0);
        return set;
    }

    static std::shared_ptr<const EmoticonPatterns> load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ArgumentError("cannot open emoticon pattern file '" + path + "'");
        std::ostringstream os;
        os << in.rdbuf();
        return parse(os.str());
    }

    /// The shipped pattern set (identical to data/emoticons_v1.txt).
    static std::shared_ptr<const EmoticonPatterns> builtin() {
        static const auto set = parse(detail::kEmoticonsV1);
        return set;
    }

    int version() const noexcept { return version_; }
    const std::vector<std::string>& patterns() const noexcept { return patterns_; }
    const std::vector<std::string>& literals() const noexcept { return literals_; }
    const icu::RegexPattern& regex() const noexcept { return *regex_; }

private:
    EmoticonPatterns() = default;

    static bool is_word_char(char32_t c) {
        return u_isalpha(static_cast<UChar32>(c)) || u_isdigit(static_cast<UChar32>(c));
    }

    static std::string literal_pattern(const std::string& lit) {
        const auto cps = utf8::decode(lit);
        std::string p;
        if (!cps.empty() && is_word_char(cps.front())) p += "(?<![\\p{L}\\p{N}])";
        p += "\\Q" + lit + "\\E";
        if (!cps.empty() && is_word_char(cps.back())) p += "(?![\\p{L}\\p{N}])";
        return p;
    }

    int version_ = 0;
    std::vector<std::string> patterns_;
    std::vector<std::string> literals_;
    std::unique_ptr<icu::RegexPattern> regex_;
};

// ---------------------------------------------------------------------------
// Traditional to simplified Chinese table

/// Single-codepoint mapping table. Text format: `FROM\tTO` hex codepoints
/// (optional `U+` prefix), `#` comments, `# version: N` sets the version.
class CharMap {
public:
    static std::shared_ptr<const CharMap> parse(std::string_view source) {
        auto map = std::make_shared<CharMap>();
        std::istringstream in{std::string(source)};
        std::string line;
        std::size_t lineno = 0;
        auto cp = [&](std::string s) -> char32_t {
            if (s.rfind("U+", 0) == 0 || s.rfind("u+", 0) == 0) s = s.substr(2);
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(s, &used, 16);
            } catch (const std::exception&) {
                throw ParseError("bad codepoint '" + s + "'", lineno);
            }
            if (used != s.size() || v > 0x10FFFF) throw ParseError("bad codepoint '" + s + "'", lineno);
            return static_cast<char32_t>(v);
        };
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line[0] == '#') {
                if (line.rfind("# version:", 0) == 0) map->version_ = std::stoi(line.substr(10));
                continue;
            }
            const auto tab = line.find('\t');
            if (tab == std::string::npos) throw ParseError("expected two tab-separated codepoints", lineno);
            map->table_[cp(line.substr(0, tab))] = cp(line.substr(tab + 1));
        }
        return map;
    }

    static std::shared_ptr<const CharMap> load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ArgumentError("cannot open mapping table '" + path + "'");
        std::ostringstream os;
        os << in.rdbuf();
        return parse(os.str());
    }

    static std::shared_ptr<const CharMap> builtin_zh_t2s() {
        static const auto map = [] {
            auto m = std::make_shared<CharMap>();
            for (const auto& [from, to] : detail::kZhT2sTable) m->table_[from] = to;
            m->version_ = detail::kZhT2sVersion;
            return std::shared_ptr<const CharMap>(m);
        }();
        return map;
    }

    char32_t operator()(char32_t c) const {
        const auto it = table_.find(c);
        return it == table_.end() ? c : it->second;
    }

    int version() const noexcept { return version_; }
    std::size_t size() const noexcept { return table_.size(); }
    const std::unordered_map<char32_t, char32_t>& table() const noexcept { return table_; }

private:
    std::unordered_map<char32_t, char32_t> table_;
    int version_ = 0;
};

// ---------------------------------------------------------------------------
// Rule set

/// Per-language character folding. Latin letters are always lowercased.
struct LanguagePolicy {
    bool nfkc = false;
    bool traditional_to_simplified = false;
};

struct NormalizationRuleSet {
    std::string emoji_token_prefix = "EMOJI_";
    std::string emoticon_token = "EMOTICON";
    std::string url_token = "URL";
    std::map<std::string, LanguagePolicy> policies;
    std::shared_ptr<const EmoticonPatterns> emoticons;
    std::shared_ptr<const CharMap> zh_t2s;

    /// en: lowercase only; ja: NFKC; zh: traditional to simplified.
    static NormalizationRuleSet defaults() {
        NormalizationRuleSet r;
        r.policies["en"] = {};
        r.policies["ja"] = {.nfkc = true};
        r.policies["zh"] = {.traditional_to_simplified = true};
        r.emoticons = EmoticonPatterns::builtin();
        r.zh_t2s = CharMap::builtin_zh_t2s();
        return r;
    }

    void validate(const LanguageSet& langs) const {
        auto has_space = [](const std::string& s) {
            return s.empty() || std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
        };
        if (has_space(emoji_token_prefix) || has_space(emoticon_token) || has_space(url_token)) {
            throw ConfigError("replacement tokens must be non-empty and contain no whitespace");
        }
        for (const auto& l : langs) {
            if (!policies.contains(l)) throw ConfigError("no normalization policy for language '" + l + "'");
        }
        if (!emoticons) throw ConfigError("no emoticon pattern set");
    }

    /// Identifies everything that changes normalization output.
    std::string fingerprint() const {
        std::ostringstream os;
        os << "norm1;emoji=" << emoji_token_prefix << ";emoticon=" << emoticon_token
           << "@v" << (emoticons ? emoticons->version() : 0) << ";url=" << url_token
           << ";t2s@v" << (zh_t2s ? zh_t2s->version() : 0);
        for (const auto& [lang, p] : policies) {
            os << ";" << lang << "=" << (p.nfkc ? "nfkc" : "") << (p.traditional_to_simplified ? "t2s" : "");
        }
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// normalize

namespace detail {

inline const icu::RegexPattern& url_regex() {
    static const std::unique_ptr<icu::RegexPattern> re = [] {
        UParseError perr;
        UErrorCode status = U_ZERO_ERROR;
        std::unique_ptr<icu::RegexPattern> p(icu::RegexPattern::compile(
            icu::UnicodeString::fromUTF8(R"((?:https?|ftp)://[A-Za-z0-9\-._~:/?#\[\]@!$&*+,;=%]+|www\.[A-Za-z0-9\-._~:/?#\[\]@!$&*+,;=%]+)"),
            UREGEX_CASE_INSENSITIVE, perr, status));
        if (U_FAILURE(status)) throw Error("internal: URL pattern failed to compile");
        return p;
    }();
    return *re;
}

struct Piece {
    std::u32string text;
    bool reserved = false;
};

inline bool is_reserved_token(std::u32string_view chunk, const NormalizationRuleSet& rules) {
    const std::string s = utf8::encode(chunk);
    if (s == rules.url_token || s == rules.emoticon_token) return true;
    const auto& pre = rules.emoji_token_prefix;
    if (s.size() <= pre.size() || s.compare(0, pre.size(), pre) != 0) return false;
    const auto hex = std::string_view(s).substr(pre.size());
    return hex.size() >= 4 && hex.size() <= 6 &&
           std::all_of(hex.begin(), hex.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'F'); });
}

inline std::u32string to_u32(const icu::UnicodeString& u) {
    std::u32string r(static_cast<std::size_t>(u.countChar32()), U'\0');
    UErrorCode st = U_ZERO_ERROR;
    u.toUTF32(reinterpret_cast<UChar32*>(r.data()), static_cast<int32_t>(r.size()), st);
    return r;
}

inline icu::UnicodeString to_u16(std::u32string_view s) {
    return icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                         static_cast<int32_t>(s.size()));
}

/// NFKC, except that characters whose compatibility decomposition introduces
/// whitespace (spacing accents such as U+00B4 and U+FFE3) are kept as they are:
/// they are face parts in kaomoji and must not be split into space + mark.
inline std::u32string nfkc_keep_spacing_marks(const std::u32string& s) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status)) throw Error("ICU NFKC normalizer unavailable");
    auto keep = [&](char32_t c) {
        if (c < 0x80 || is_space(c)) return false;
        icu::UnicodeString d;
        if (!nfkc->getDecomposition(static_cast<UChar32>(c), d)) return false;
        for (int32_t i = 0; i < d.length(); i = d.moveIndex32(i, 1)) {
            if (is_space(static_cast<char32_t>(d.char32At(i)))) return true;
        }
        return false;
    };
    std::u32string out;
    std::size_t begin = 0;
    auto flush = [&](std::size_t end) {
        if (end <= begin) return;
        UErrorCode st = U_ZERO_ERROR;
        const icu::UnicodeString n = nfkc->normalize(to_u16(std::u32string_view(s).substr(begin, end - begin)), st);
        if (U_FAILURE(st)) throw Error("NFKC normalization failed");
        out += to_u32(n);
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (keep(s[i])) {
            flush(i);
            out.push_back(s[i]);
            begin = i + 1;
        }
    }
    flush(s.size());
    // compatibility forms may carry presentation selectors
    out.erase(std::remove_if(out.begin(), out.end(), is_emoji_modifier_glue), out.end());
    return out;
}

inline std::u32string fold(std::u32string s, const LanguagePolicy& policy, const NormalizationRuleSet& rules) {
    s.erase(std::remove_if(s.begin(), s.end(), is_emoji_modifier_glue), s.end());
    if (policy.nfkc) s = nfkc_keep_spacing_marks(s);
    if (policy.traditional_to_simplified && rules.zh_t2s) {
        for (auto& c : s) c = (*rules.zh_t2s)(c);
    }
    for (auto& c : s) {
        UErrorCode status = U_ZERO_ERROR;
        if (uscript_getScript(static_cast<UChar32>(c), &status) == USCRIPT_LATIN) {
            c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
        }
    }
    return s;
}

/// Split every plain piece around matches of `re`, turning matches into
/// reserved `token` pieces.
inline std::vector<Piece> replace_matches(const std::vector<Piece>& in, const icu::RegexPattern& re,
                                          const std::u32string& token) {
    std::vector<Piece> out;
    for (const auto& piece : in) {
        if (piece.reserved) {
            out.push_back(piece);
            continue;
        }
        const auto u16 = to_u16(piece.text);
        UErrorCode status = U_ZERO_ERROR;
        std::unique_ptr<icu::RegexMatcher> m(re.matcher(u16, status));
        if (U_FAILURE(status)) throw Error("regex matcher creation failed");
        auto slice = [&](int32_t from, int32_t to) { return to_u32(u16.tempSubStringBetween(from, to)); };
        int32_t last = 0;
        while (m->find(status) && U_SUCCESS(status)) {
            const int32_t b = m->start(status);
            const int32_t e = m->end(status);
            if (e == b) continue;
            if (b > last) out.push_back({slice(last, b), false});
            out.push_back({token, true});
            last = e;
        }
        if (last < u16.length()) out.push_back({slice(last, u16.length()), false});
    }
    return out;
}

inline std::vector<Piece> replace_emoji(const std::vector<Piece>& in, const NormalizationRuleSet& rules) {
    std::vector<Piece> out;
    for (const auto& piece : in) {
        if (piece.reserved) {
            out.push_back(piece);
            continue;
        }
        std::u32string plain;
        for (char32_t c : piece.text) {
            if (!is_emoji(c)) {
                plain.push_back(c);
                continue;
            }
            if (!plain.empty()) out.push_back({std::exchange(plain, {}), false});
            char hex[16];
            std::snprintf(hex, sizeof hex, "%04X", static_cast<unsigned>(c));
            out.push_back({utf8::decode(rules.emoji_token_prefix + hex), true});
        }
        if (!plain.empty()) out.push_back({std::move(plain), false});
    }
    return out;
}

}  // namespace detail

/// Normalize one tweet's text.
///
/// Pipeline: chunks that already are replacement tokens are kept verbatim;
/// everything else is folded (emoji joiners removed, NFKC and/or
/// traditional-to-simplified per language policy, Latin letters lowercased),
/// then URLs, emoticons and emoji are replaced by their tokens. The result is
/// whitespace-collapsed with single ASCII spaces and is a fixed point of
/// normalize().
inline std::string normalize(std::string_view text, const std::string& lang,
                             const NormalizationRuleSet& rules) {
    const auto pit = rules.policies.find(lang);
    if (pit == rules.policies.end()) throw ConfigError("no normalization policy for language '" + lang + "'");
    if (!rules.emoticons) throw ConfigError("no emoticon pattern set");

    const std::u32string cps = utf8::decode(text);
    std::vector<detail::Piece> pieces;
    {
        std::size_t i = 0;
        while (i < cps.size()) {
            while (i < cps.size() && is_space(cps[i])) ++i;
            std::size_t j = i;
            while (j < cps.size() && !is_space(cps[j])) ++j;
            if (j == i) break;
            std::u32string_view chunk(cps.data() + i, j - i);
            if (detail::is_reserved_token(chunk, rules)) {
                pieces.push_back({std::u32string(chunk), true});
            } else if (!pieces.empty() && !pieces.back().reserved) {
                pieces.back().text += U' ';
                pieces.back().text += chunk;
            } else {
                pieces.push_back({std::u32string(chunk), false});
            }
            i = j;
        }
    }
    for (auto& p : pieces) {
        if (!p.reserved) p.text = detail::fold(std::move(p.text), pit->second, rules);
    }
    pieces = detail::replace_matches(pieces, detail::url_regex(), utf8::decode(rules.url_token));
    // A replacement turns its neighbours' context into a piece edge, which can
    // complete a new match; iterate so the result is a fixed point.
    for (std::size_t before = 0; before != pieces.size();) {
        before = pieces.size();
        pieces = detail::replace_matches(pieces, rules.emoticons->regex(), utf8::decode(rules.emoticon_token));
    }
    pieces = detail::replace_emoji(pieces, rules);

    std::string out;
    auto emit = [&](std::u32string_view tok) {
        if (!out.empty()) out += ' ';
        out += utf8::encode(tok);
    };
    for (const auto& p : pieces) {
        if (p.reserved) {
            emit(p.text);
            continue;
        }
        std::size_t i = 0;
        while (i < p.text.size()) {
            while (i < p.text.size() && is_space(p.text[i])) ++i;
            std::size_t j = i;
            while (j < p.text.size() && !is_space(p.text[j])) ++j;
            if (j > i) emit(std::u32string_view(p.text.data() + i, j - i));
            i = j;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// tokenize

enum class TokenizeMode { whitespace, pretokenized };

inline TokenizeMode parse_tokenize_mode(std::string_view s) {
    if (s == "whitespace") return TokenizeMode::whitespace;
    if (s == "pretokenized") return TokenizeMode::pretokenized;
    throw ArgumentError("unknown tokenize mode '" + std::string(s) + "'");
}

/// Split on runs of Unicode whitespace.
inline std::vector<std::string> split_whitespace(std::string_view text) {
    const auto cps = utf8::decode(text);
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_space(cps[i])) ++i;
        std::size_t j = i;
        while (j < cps.size() && !is_space(cps[j])) ++j;
        if (j > i) out.push_back(utf8::encode(std::u32string_view(cps.data() + i, j - i)));
        i = j;
    }
    return out;
}

/// Whitespace mode splits `text`; pretokenized mode returns `tokens` unchanged.
inline std::vector<std::string> tokenize(std::string_view text, TokenizeMode mode,
                                         const std::optional<std::vector<std::string>>& tokens = std::nullopt) {
    if (mode == TokenizeMode::whitespace) return split_whitespace(text);
    if (!tokens) throw ConfigError("pretokenized mode requires a tokens field");
    return *tokens;
}

struct TokenizedTweet {
    std::string id;
    std::string lang;
    Polarity label = Polarity::neutral;
    std::vector<std::string> tokens;

    std::size_t length() const noexcept { return tokens.size(); }
};

/// Normalize and tokenize one record. In pretokenized mode every supplied
/// token is normalized on its own and re-split, so replacement tokens always
/// stand alone. Throws DropError when nothing survives.
inline TokenizedTweet preprocess_record(const TweetRecord& record, const NormalizationRuleSet& rules,
                                        TokenizeMode mode) {
    TokenizedTweet t{record.id, record.lang, record.label, {}};
    if (mode == TokenizeMode::whitespace) {
        t.tokens = tokenize(normalize(record.text, record.lang, rules), mode);
    } else {
        if (!record.tokens) throw ConfigError("record '" + record.id + "' has no tokens field");
        for (const auto& tok : tokenize({}, mode, record.tokens)) {
            for (auto& piece : split_whitespace(normalize(tok, record.lang, rules))) {
                t.tokens.push_back(std::move(piece));
            }
        }
    }
    if (t.tokens.empty()) throw DropError(record.id);
    return t;
}

struct PreprocessedCorpus {
    std::vector<TokenizedTweet> tweets;
    std::vector<std::string> dropped_ids;
};

inline PreprocessedCorpus preprocess_corpus(const std::vector<TweetRecord>& records,
                                            const NormalizationRuleSet& rules, TokenizeMode mode) {
    PreprocessedCorpus out;
    for (const auto& r : records) {
        try {
            out.tweets.push_back(preprocess_record(r, rules, mode));
        } catch (const DropError& e) {
            out.dropped_ids.push_back(e.record_id());
        }
    }
    return out;
}

/// One JSON object per line: {"id","lang","label","tokens"}; readable again
/// by load_corpus in pretokenized mode.
inline void write_tokenized_jsonl(std::ostream& os, const std::vector<TokenizedTweet>& tweets) {
    for (const auto& t : tweets) {
        nlohmann::json j;
        j["id"] = t.id;
        j["lang"] = t.lang;
        j["label"] = std::string(to_string(t.label));
        j["tokens"] = t.tokens;
        os << j.dump() << '\n';
    }
}

}  // namespace xlsent

#endif  // XLSENT_PREPROCESS_HPP
