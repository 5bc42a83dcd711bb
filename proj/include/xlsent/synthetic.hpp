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

#ifndef XLSENT_SYNTHETIC_HPP
#define XLSENT_SYNTHETIC_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "xlsent/align.hpp"
#include "xlsent/corpus.hpp"
#include "xlsent/embeddings.hpp"
#include "xlsent/preprocess.hpp"
#include "xlsent/rng.hpp"

namespace xlsent::synthetic {

/// Generated corpus plus everything needed to embed and align it.
struct Fixture {
    std::vector<TweetRecord> records;
    std::vector<TokenizedTweet> tweets;         // records, already tokenized
    std::map<std::string, EmbeddingTable> tables;
    /// Keyed by source language: entries (source word, pivot word).
    std::map<std::string, BilingualDictionary> dictionaries;
    std::string pivot_lang;
    FrequencyRanks pivot_ranks;
};

inline Eigen::MatrixXd gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
    return m;
}

/// Haar-ish random orthogonal matrix from the QR of a Gaussian matrix.
inline Eigen::MatrixXd random_rotation(Rng& rng, Eigen::Index d) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(rng, d, d));
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    // Fix column signs so the result does not depend on the QR sign convention.
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (R(i, i) < 0) Q.col(i) = -Q.col(i);
    }
    return Q;
}

inline std::string word_name(const std::string& lang, std::size_t id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_w%04zu", lang.c_str(), id);
    return buf;
}

inline void add_tweet(Fixture& fx, std::string id, const std::string& lang, Polarity label,
                      std::vector<std::string> tokens) {
    std::string text;
    for (const auto& t : tokens) text += (text.empty() ? "" : " ") + t;
    fx.records.push_back({id, lang, text, std::nullopt, label});
    fx.tweets.push_back({std::move(id), lang, label, std::move(tokens)});
}

// ---------------------------------------------------------------------------
// Marker-token toy corpus

/// `per_class` tweets of each polarity, languages taken in turn; every tweet
/// holds random filler words plus exactly one marker word naming its class.
inline Fixture marker_toy(std::uint64_t seed, std::size_t dim = 16, std::size_t per_class = 10,
                          std::vector<std::string> langs = {"en", "ja", "zh"}) {
    Rng rng = Rng::stream(seed, 0x70F);
    Fixture fx;
    fx.pivot_lang = langs.front();
    constexpr std::size_t kFillers = 12;
    for (const auto& l : langs) {
        EmbeddingTable t(l, dim);
        for (std::size_t w = 0; w < kFillers + kNumClasses; ++w) {
            t.insert(word_name(l, w), gaussian(rng, static_cast<Eigen::Index>(dim), 1).col(0));
        }
        fx.tables.emplace(l, std::move(t));
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < per_class; ++i) {
        for (Polarity p : kAllPolarities) {
            const auto& l = langs[n % langs.size()];
            std::vector<std::string> toks;
            const auto len = 3 + rng.below(4);
            for (std::size_t k = 0; k < len; ++k) toks.push_back(word_name(l, rng.below(kFillers)));
            toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(rng.below(toks.size() + 1)),
                        word_name(l, kFillers + static_cast<std::size_t>(code(p))));
            add_tweet(fx, "toy" + std::to_string(n), l, p, std::move(toks));
            ++n;
        }
    }
    return fx;
}

// ---------------------------------------------------------------------------
// Trilingual rotated-space fixture

struct TrilingualOptions {
    std::uint64_t seed = 1;
    std::size_t dim = 20;
    std::vector<std::string> langs{"en", "ja", "zh"};  // first entry is the pivot
    std::vector<std::size_t> tweets_per_lang{300, 75, 75};
    /// Sentiment-bearing words per class and language; each tweet uses one or two.
    std::size_t markers_per_class = 40;
    /// Spread of marker words around their class centroid in the latent space.
    double marker_spread = 0.8;
    std::size_t fillers = 300;
    std::size_t min_fillers = 3;
    std::size_t max_fillers = 8;
    /// Per-component noise added to each language's rotated vectors.
    double embedding_noise = 0.05;
};

/// Three "languages" that name the same latent concepts with different
/// words; each language's embedding space is a random rotation of the latent
/// space. The class of a tweet is carried by its marker words, which cluster
/// around a per-class centroid shared by all languages.
inline Fixture trilingual(const TrilingualOptions& opt) {
    if (opt.langs.size() != opt.tweets_per_lang.size() || opt.langs.empty()) {
        throw ArgumentError("one tweet count per language is required");
    }
    if (opt.max_fillers < opt.min_fillers) throw ArgumentError("max_fillers < min_fillers");
    Rng rng = Rng::stream(opt.seed, 0x7121);
    const auto d = static_cast<Eigen::Index>(opt.dim);
    const std::size_t n_markers = kNumClasses * opt.markers_per_class;
    const std::size_t n_concepts = opt.fillers + n_markers;

    // Latent concept vectors: fillers first, then markers class by class.
    Eigen::MatrixXd latent(d, static_cast<Eigen::Index>(n_concepts));
    latent.leftCols(static_cast<Eigen::Index>(opt.fillers)) = gaussian(rng, d, static_cast<Eigen::Index>(opt.fillers));
    const Eigen::MatrixXd centroids = gaussian(rng, d, static_cast<Eigen::Index>(kNumClasses));
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        for (std::size_t m = 0; m < opt.markers_per_class; ++m) {
            const auto c = static_cast<Eigen::Index>(opt.fillers + k * opt.markers_per_class + m);
            latent.col(c) = centroids.col(static_cast<Eigen::Index>(k)) + opt.marker_spread * gaussian(rng, d, 1).col(0);
        }
    }

    Fixture fx;
    fx.pivot_lang = opt.langs.front();
    // Word ids are a per-language permutation of concept ids so names carry no class hint.
    std::map<std::string, std::vector<std::size_t>> word_of;
    for (const auto& l : opt.langs) {
        const Eigen::MatrixXd Q = random_rotation(rng, d);
        std::vector<std::size_t> perm(n_concepts);
        for (std::size_t i = 0; i < n_concepts; ++i) perm[i] = i;
        rng.shuffle(perm);
        EmbeddingTable t(l, opt.dim);
        for (std::size_t c = 0; c < n_concepts; ++c) {
            Eigen::VectorXd v = Q * latent.col(static_cast<Eigen::Index>(c));
            for (Eigen::Index i = 0; i < d; ++i) v[i] += opt.embedding_noise * rng.gaussian();
            t.insert(word_name(l, perm[c]), std::move(v));
        }
        word_of[l] = std::move(perm);
        fx.tables.emplace(l, std::move(t));
    }
    for (std::size_t li = 1; li < opt.langs.size(); ++li) {
        auto& dict = fx.dictionaries[opt.langs[li]];
        for (std::size_t c = 0; c < n_concepts; ++c) {
            dict.push_back({word_name(opt.langs[li], word_of[opt.langs[li]][c]),
                            word_name(fx.pivot_lang, word_of[fx.pivot_lang][c])});
        }
    }

    std::size_t n = 0;
    for (std::size_t li = 0; li < opt.langs.size(); ++li) {
        const auto& l = opt.langs[li];
        for (std::size_t i = 0; i < opt.tweets_per_lang[li]; ++i) {
            const Polarity p = kAllPolarities[i % kNumClasses];
            std::vector<std::string> toks;
            const auto n_fill = opt.min_fillers + rng.below(opt.max_fillers - opt.min_fillers + 1);
            for (std::size_t k = 0; k < n_fill; ++k) toks.push_back(word_name(l, word_of[l][rng.below(opt.fillers)]));
            const auto n_mark = 1 + rng.below(2);
            for (std::size_t k = 0; k < n_mark; ++k) {
                const auto c = opt.fillers + static_cast<std::size_t>(code(p)) * opt.markers_per_class +
                               rng.below(opt.markers_per_class);
                toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(rng.below(toks.size() + 1)),
                            word_name(l, word_of[l][c]));
            }
            add_tweet(fx, l + "-" + std::to_string(n), l, p, std::move(toks));
            ++n;
        }
    }

    // Pivot-language frequency ranks: a fixed Zipf-like order over its whole
    // vocabulary, standing in for counts from a large external corpus.
    std::unordered_map<std::string, std::size_t> counts;
    std::vector<std::size_t> order(n_concepts);
    for (std::size_t i = 0; i < n_concepts; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t r = 0; r < n_concepts; ++r) {
        counts[word_name(fx.pivot_lang, word_of[fx.pivot_lang][order[r]])] = 100000 / (r + 1) + 1;
    }
    fx.pivot_ranks = ranks_from_counts(counts);
    return fx;
}

}  // namespace xlsent::synthetic

#endif  // XLSENT_SYNTHETIC_HPP
