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

#ifndef XLSENT_CORPUS_HPP
#define XLSENT_CORPUS_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xlsent/error.hpp"
#include "xlsent/rng.hpp"

namespace xlsent {

/// Three-way global polarity. The integer codes are part of every file format.
enum class Polarity : std::uint8_t { positive = 0, neutral = 1, negative = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Polarity, kNumClasses> kAllPolarities{
    Polarity::positive, Polarity::neutral, Polarity::negative};

constexpr int code(Polarity p) noexcept { return static_cast<int>(p); }

inline Polarity polarity_from_code(int c) {
    if (c < 0 || c >= static_cast<int>(kNumClasses)) {
        throw ArgumentError("polarity code out of range: " + std::to_string(c));
    }
    return static_cast<Polarity>(c);
}

constexpr std::string_view to_string(Polarity p) noexcept {
    switch (p) {
        case Polarity::positive: return "positive";
        case Polarity::neutral: return "neutral";
        case Polarity::negative: return "negative";
    }
    return "?";
}

/// Accepted label spellings (case-insensitive):
///   positive | pos | 0,  neutral | neu | neutr | 1,  negative | neg | 2
inline std::optional<Polarity> parse_polarity(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "positive" || lower == "pos" || lower == "0") return Polarity::positive;
    if (lower == "neutral" || lower == "neu" || lower == "neutr" || lower == "1") return Polarity::neutral;
    if (lower == "negative" || lower == "neg" || lower == "2") return Polarity::negative;
    return std::nullopt;
}

/// The closed set of language codes an experiment accepts.
using LanguageSet = std::set<std::string>;

inline LanguageSet default_languages() { return {"en", "ja", "zh"}; }

struct TweetRecord {
    std::string id;
    std::string lang;
    std::string text;
    std::optional<std::vector<std::string>> tokens;
    Polarity label = Polarity::neutral;
};

enum class CorpusFormat { jsonl, tsv };

inline CorpusFormat parse_corpus_format(std::string_view s) {
    if (s == "jsonl") return CorpusFormat::jsonl;
    if (s == "tsv") return CorpusFormat::tsv;
    throw ArgumentError("unknown corpus format '" + std::string(s) + "'");
}

namespace detail {

inline void validate_record(const TweetRecord& r, const LanguageSet& langs, std::size_t line) {
    if (r.id.empty()) throw SchemaError("record has an empty id", line);
    if (!langs.contains(r.lang)) throw SchemaError("unknown language '" + r.lang + "'", line);
    const bool no_tokens = !r.tokens || r.tokens->empty();
    if (r.text.empty() && no_tokens) throw SchemaError("record has neither text nor tokens", line);
}

inline TweetRecord parse_jsonl_line(const std::string& line, std::size_t lineno,
                                    const LanguageSet& langs) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.is_object()) throw ParseError("expected a JSON object", lineno);

    TweetRecord r;
    try {
        const auto& id = j.at("id");
        if (id.is_string()) {
            r.id = id.get<std::string>();
        } else if (id.is_number_integer()) {
            r.id = std::to_string(id.get<long long>());
        } else {
            throw ParseError("field 'id' must be a string or integer", lineno);
        }
        r.lang = j.at("lang").get<std::string>();
        if (j.contains("text") && !j["text"].is_null()) r.text = j["text"].get<std::string>();
        if (j.contains("tokens") && !j["tokens"].is_null()) {
            r.tokens = j["tokens"].get<std::vector<std::string>>();
        }
        const auto& label = j.at("label");
        std::optional<Polarity> p;
        if (label.is_string()) {
            p = parse_polarity(label.get<std::string>());
        } else if (label.is_number_integer()) {
            const auto c = label.get<long long>();
            if (c >= 0 && c < static_cast<long long>(kNumClasses)) p = static_cast<Polarity>(c);
        }
        if (!p) throw SchemaError("unknown label " + label.dump(), lineno);
        r.label = *p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad record field: ") + e.what(), lineno);
    }
    validate_record(r, langs, lineno);
    return r;
}

inline TweetRecord parse_tsv_line(const std::string& line, std::size_t lineno,
                                  const LanguageSet& langs) {
    std::array<std::string, 3> cols;
    std::size_t pos = 0;
    for (auto& col : cols) {
        const auto tab = line.find('\t', pos);
        if (tab == std::string::npos) throw ParseError("expected 4 tab-separated columns", lineno);
        col = line.substr(pos, tab - pos);
        pos = tab + 1;
    }
    TweetRecord r;
    r.id = cols[0];
    r.lang = cols[1];
    const auto p = parse_polarity(cols[2]);
    if (!p) throw SchemaError("unknown label '" + cols[2] + "'", lineno);
    r.label = *p;
    r.text = line.substr(pos);
    validate_record(r, langs, lineno);
    return r;
}

}  // namespace detail

/// Parse a corpus from a stream. Blank lines are skipped; a TSV header row
/// starting with "id\tlang" is skipped.
inline std::vector<TweetRecord> read_corpus(std::istream& in, CorpusFormat format,
                                            const LanguageSet& langs = default_languages()) {
    std::vector<TweetRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (format == CorpusFormat::jsonl) {
            out.push_back(detail::parse_jsonl_line(line, lineno, langs));
        } else {
            if (lineno == 1 && line.rfind("id\tlang\t", 0) == 0) continue;
            out.push_back(detail::parse_tsv_line(line, lineno, langs));
        }
    }
    return out;
}

inline std::vector<TweetRecord> load_corpus(const std::string& path, CorpusFormat format,
                                            const LanguageSet& langs = default_languages()) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open corpus '" + path + "'");
    return read_corpus(in, format, langs);
}

/// Assignment of every record id to one of k folds.
struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    bool stratified = false;
    std::map<std::string, std::size_t> assignments;

    /// Ids of fold `f`, in the order they appear in `records`.
    std::vector<std::string> fold_ids(std::size_t f, const std::vector<TweetRecord>& records) const {
        std::vector<std::string> ids;
        for (const auto& r : records) {
            if (assignments.at(r.id) == f) ids.push_back(r.id);
        }
        return ids;
    }

    std::vector<std::size_t> fold_sizes() const {
        std::vector<std::size_t> sizes(k, 0);
        for (const auto& [id, f] : assignments) ++sizes[f];
        return sizes;
    }

    std::string to_tsv() const {
        std::ostringstream os;
        os << "# folds k=" << k << " seed=" << seed << " stratified=" << (stratified ? 1 : 0) << '\n';
        for (const auto& [id, f] : assignments) os << id << '\t' << f << '\n';
        return os.str();
    }

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Partition records into k folds. Records are shuffled with a seeded stream and
/// dealt round-robin; with `stratify` the shuffle is done per label and the
/// label blocks are dealt consecutively, so both fold sizes and per-label
/// counts per fold differ by at most one.
inline FoldPlan make_folds(const std::vector<TweetRecord>& records, std::size_t k,
                           std::uint64_t seed, bool stratify = true) {
    if (k == 0) throw ArgumentError("fold count must be positive");
    if (k > records.size()) {
        throw ArgumentError("fold count " + std::to_string(k) + " exceeds record count " +
                            std::to_string(records.size()));
    }
    FoldPlan plan{k, seed, stratify, {}};

    std::vector<std::string> order;
    order.reserve(records.size());
    if (stratify) {
        for (Polarity p : kAllPolarities) {
            std::vector<std::string> block;
            for (const auto& r : records) {
                if (r.label == p) block.push_back(r.id);
            }
            Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(code(p)) + 1);
            rng.shuffle(block);
            order.insert(order.end(), block.begin(), block.end());
        }
    } else {
        for (const auto& r : records) order.push_back(r.id);
        Rng rng = Rng::stream(seed, 0);
        rng.shuffle(order);
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!plan.assignments.emplace(order[i], i % k).second) {
            throw ArgumentError("duplicate record id '" + order[i] + "'");
        }
    }
    return plan;
}

/// Hold out round(fraction * n) ids as a development set. Both halves keep
/// the input order.
inline std::pair<std::vector<std::string>, std::vector<std::string>> split_dev(
    const std::vector<std::string>& ids, double fraction, std::uint64_t seed) {
    if (ids.empty()) throw ArgumentError("cannot split an empty id list");
    if (!(fraction > 0.0 && fraction < 1.0)) throw ArgumentError("dev fraction must lie in (0,1)");
    if (fraction * static_cast<double>(ids.size()) < 1.0) {
        throw ArgumentError("dev fraction selects no ids");
    }
    const auto dev_size = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(ids.size())));

    std::vector<std::size_t> idx(ids.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng = Rng::stream(seed, 0xDE5);
    rng.shuffle(idx);
    std::vector<bool> is_dev(ids.size(), false);
    for (std::size_t i = 0; i < dev_size; ++i) is_dev[idx[i]] = true;

    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        (is_dev[i] ? out.second : out.first).push_back(ids[i]);
    }
    return out;
}

}  // namespace xlsent

#endif  // XLSENT_CORPUS_HPP
