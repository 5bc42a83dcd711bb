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

#ifndef XLSENT_EMBEDDINGS_HPP
#define XLSENT_EMBEDDINGS_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/error.hpp"
#include "xlsent/preprocess.hpp"
#include "xlsent/rng.hpp"

namespace xlsent {

/// word -> rank, 1 = most frequent.
using FrequencyRanks = std::unordered_map<std::string, std::size_t>;

/// Rank by descending count; equal counts are ordered lexicographically.
inline FrequencyRanks ranks_from_counts(const std::unordered_map<std::string, std::size_t>& counts) {
    std::vector<std::pair<std::string, std::size_t>> v(counts.begin(), counts.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    FrequencyRanks ranks;
    for (std::size_t i = 0; i < v.size(); ++i) ranks.emplace(v[i].first, i + 1);
    return ranks;
}

/// Token counts of one language's tweets, ranked.
inline FrequencyRanks ranks_from_corpus(const std::vector<TokenizedTweet>& tweets, const std::string& lang) {
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& t : tweets) {
        if (t.lang != lang) continue;
        for (const auto& tok : t.tokens) ++counts[tok];
    }
    return ranks_from_counts(counts);
}

/// Sidecar frequency file: one "word\tcount" per line.
inline FrequencyRanks load_frequency_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open frequency file '" + path + "'");
    std::unordered_map<std::string, std::size_t> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected word<TAB>count", lineno);
        std::size_t count = 0;
        const auto* b = line.data() + tab + 1;
        const auto* e = line.data() + line.size();
        const auto [ptr, ec] = std::from_chars(b, e, count);
        if (ec != std::errc() || ptr != e) throw ParseError("bad count", lineno);
        counts[line.substr(0, tab)] += count;
    }
    return ranks_from_counts(counts);
}

/// Pre-trained vectors of one language.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::string lang, std::size_t dim) : lang_(std::move(lang)), dim_(dim) {
        if (dim_ == 0) throw ArgumentError("embedding dimension must be positive");
    }

    /// Insert or replace; returns true when the word was already present.
    bool insert(const std::string& word, Eigen::VectorXd v) {
        if (static_cast<std::size_t>(v.size()) != dim_) {
            throw ArgumentError("vector for '" + word + "' has " + std::to_string(v.size()) +
                                " components, table dim is " + std::to_string(dim_));
        }
        const auto [it, fresh] = index_.emplace(word, rows_.size());
        if (fresh) {
            rows_.push_back(std::move(v));
            words_.push_back(word);
            return false;
        }
        rows_[it->second] = std::move(v);
        ++duplicates_;
        return true;
    }

    const Eigen::VectorXd* find(const std::string& word) const {
        const auto it = index_.find(word);
        return it == index_.end() ? nullptr : &rows_[it->second];
    }
    bool contains(const std::string& word) const { return index_.contains(word); }

    const Eigen::VectorXd& at(const std::string& word) const {
        const auto* v = find(word);
        if (!v) throw ArgumentError("word '" + word + "' not in the " + lang_ + " table");
        return *v;
    }

    const std::string& lang() const noexcept { return lang_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return rows_.size(); }
    /// Words in insertion order.
    const std::vector<std::string>& words() const noexcept { return words_; }
    std::size_t duplicate_count() const noexcept { return duplicates_; }

    std::optional<FrequencyRanks> frequency_rank;

    /// Content hash over language, dimension, words and vector bits.
    std::uint64_t content_hash() const {
        std::vector<std::size_t> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return words_[a] < words_[b]; });
        std::uint64_t h = fnv1a(lang_);
        h = fnv1a(std::to_string(dim_), h);
        for (auto i : order) {
            h = fnv1a(words_[i], h);
            h = fnv1a(std::string_view(reinterpret_cast<const char*>(rows_[i].data()),
                                       sizeof(double) * dim_),
                      h);
        }
        return h;
    }

private:
    std::string lang_;
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> words_;
    std::vector<Eigen::VectorXd> rows_;
    std::size_t duplicates_ = 0;
};

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

/// word2vec text format: a "V k" header, then V lines "word v1 ... vk".
inline EmbeddingTable read_embedding_table(std::istream& in, const std::string& lang) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto head = detail::split_spaces(line);
    std::size_t vocab = 0, dim = 0;
    auto to_size = [](std::string_view s, std::size_t& v) {
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        return ec == std::errc() && p == s.data() + s.size();
    };
    if (head.size() != 2 || !to_size(head[0], vocab) || !to_size(head[1], dim) || dim == 0) {
        throw ParseError("header must be 'vocab_size dim'", 1);
    }
    EmbeddingTable table(lang, dim);
    std::size_t lineno = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_spaces(line);
        if (fields.size() != dim + 1) {
            throw ParseError("expected word and " + std::to_string(dim) + " values, got " +
                                 std::to_string(fields.empty() ? 0 : fields.size() - 1),
                             lineno);
        }
        if (rows == vocab) throw ParseError("more rows than the header's vocab_size", lineno);
        Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
        for (std::size_t k = 0; k < dim; ++k) {
            if (!detail::parse_double(fields[k + 1], v[static_cast<Eigen::Index>(k)])) {
                throw ParseError("bad number '" + std::string(fields[k + 1]) + "'", lineno);
            }
        }
        table.insert(std::string(fields[0]), std::move(v));
        ++rows;
    }
    if (rows != vocab) {
        throw ParseError("header declares " + std::to_string(vocab) + " rows, found " + std::to_string(rows),
                         lineno + 1);
    }
    return table;
}

inline EmbeddingTable load_embedding_table(const std::string& path, const std::string& lang) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open embedding file '" + path + "'");
    return read_embedding_table(in, lang);
}

/// Writes with 17 significant digits so a reload reproduces every bit.
inline void write_embedding_table(std::ostream& os, const EmbeddingTable& table) {
    os << table.size() << ' ' << table.dim() << '\n';
    char buf[32];
    for (const auto& w : table.words()) {
        os << w;
        for (double x : table.at(w)) {
            std::snprintf(buf, sizeof buf, " %.17g", x);
            os << buf;
        }
        os << '\n';
    }
}

/// How out-of-vocabulary tokens get their vectors.
struct OovPolicy {
    std::uint64_t seed = 0;
    /// Per-component bound; <= 0 selects default_oov_scale(dim).
    double scale = 0.0;
};

inline double default_oov_scale(std::size_t dim) { return 0.5 / static_cast<double>(dim); }

/// Uniform in [-scale, scale]^dim, a pure function of (seed, lang, token).
inline Eigen::VectorXd oov_vector(std::uint64_t seed, const std::string& lang, const std::string& token,
                                  std::size_t dim, double scale) {
    std::uint64_t h = fnv1a(lang);
    h = fnv1a(std::string_view("\0", 1), h);
    h = fnv1a(token, h);
    Rng rng(derive_seed(seed, h));
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-scale, scale);
    return v;
}

/// Memo of OOV vectors. Not synchronized: share across threads only behind a lock.
class OovCache {
public:
    explicit OovCache(OovPolicy policy = {}) : policy_(policy) {}

    const Eigen::VectorXd& get(const std::string& lang, const std::string& token, std::size_t dim) {
        auto key = lang + '\0' + token;
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            const double scale = policy_.scale > 0 ? policy_.scale : default_oov_scale(dim);
            it = cache_.emplace(std::move(key), oov_vector(policy_.seed, lang, token, dim, scale)).first;
        }
        return it->second;
    }

    std::size_t size() const noexcept { return cache_.size(); }
    const OovPolicy& policy() const noexcept { return policy_; }

private:
    OovPolicy policy_;
    std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

/// Rows are the tweet's token vectors, OOV tokens filled from the cache.
inline Eigen::MatrixXd embed_tokens(const TokenizedTweet& tweet, const EmbeddingTable& table, OovCache& oov) {
    if (tweet.lang != table.lang()) {
        throw ArgumentError("tweet language '" + tweet.lang + "' does not match table '" + table.lang() + "'");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(tweet.length()), static_cast<Eigen::Index>(table.dim()));
    for (std::size_t t = 0; t < tweet.length(); ++t) {
        const auto* v = table.find(tweet.tokens[t]);
        m.row(static_cast<Eigen::Index>(t)) = v ? *v : oov.get(tweet.lang, tweet.tokens[t], table.dim());
    }
    return m;
}

inline Eigen::MatrixXd embed_tokens(const TokenizedTweet& tweet, const EmbeddingTable& table,
                                    std::uint64_t oov_seed, double oov_scale) {
    OovCache cache({oov_seed, oov_scale});
    return embed_tokens(tweet, table, cache);
}

/// Stacked vectors of a corpus vocabulary. `space` names the embedding space
/// the rows live in; it starts equal to `lang` and changes when mapped.
struct VocabularyMatrix {
    std::string lang;
    std::string space;
    std::vector<std::string> words;  // lexicographic
    Eigen::MatrixXd Z;

    std::optional<Eigen::Index> row_of(const std::string& word) const {
        const auto it = std::lower_bound(words.begin(), words.end(), word);
        if (it == words.end() || *it != word) return std::nullopt;
        return static_cast<Eigen::Index>(it - words.begin());
    }
};

/// Vocabulary of `table.lang()` tweets in byte-lexicographic order.
inline VocabularyMatrix build_vocabulary_matrix(const std::vector<TokenizedTweet>& tweets,
                                                const EmbeddingTable& table, OovCache& oov) {
    std::vector<std::string> words;
    for (const auto& t : tweets) {
        if (t.lang != table.lang()) continue;
        words.insert(words.end(), t.tokens.begin(), t.tokens.end());
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());

    VocabularyMatrix vm{table.lang(), table.lang(), std::move(words), {}};
    vm.Z.resize(static_cast<Eigen::Index>(vm.words.size()), static_cast<Eigen::Index>(table.dim()));
    for (std::size_t i = 0; i < vm.words.size(); ++i) {
        const auto* v = table.find(vm.words[i]);
        vm.Z.row(static_cast<Eigen::Index>(i)) = v ? *v : oov.get(table.lang(), vm.words[i], table.dim());
    }
    return vm;
}

}  // namespace xlsent

#endif  // XLSENT_EMBEDDINGS_HPP
