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

#ifndef XLSENT_BASELINES_HPP
#define XLSENT_BASELINES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xlsent/corpus.hpp"
#include "xlsent/error.hpp"
#include "xlsent/preprocess.hpp"

namespace xlsent {

// ---------------------------------------------------------------------------
// Features

enum class FeatureScheme { per_language, cumulative };

inline std::string to_string(FeatureScheme s) { return s == FeatureScheme::cumulative ? "cumulative" : "per_language"; }

inline std::optional<FeatureScheme> parse_feature_scheme(std::string_view s) {
    if (s == "per_language") return FeatureScheme::per_language;
    if (s == "cumulative") return FeatureScheme::cumulative;
    return std::nullopt;
}

/// Joins the two tokens of a bigram (U+241F SYMBOL FOR UNIT SEPARATOR).
inline constexpr std::string_view kBigramJoiner = "\xE2\x90\x9F";
/// Separates the language namespace from the n-gram (U+241E SYMBOL FOR RECORD SEPARATOR).
inline constexpr std::string_view kLanguageSeparator = "\xE2\x90\x9E";

/// Distinct unigram and bigram strings of a token sequence, in first-seen order.
inline std::vector<std::string> ngrams(const std::vector<std::string>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size() * 2);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out.push_back(tokens[i]);
        if (i + 1 < tokens.size()) out.push_back(tokens[i] + std::string(kBigramJoiner) + tokens[i + 1]);
    }
    return out;
}

/// Sorted, strictly increasing active column ids; every value is 1.
struct SparseBinaryVector {
    std::vector<std::uint32_t> ids;
    friend bool operator==(const SparseBinaryVector&, const SparseBinaryVector&) = default;
};

class FeatureSpace {
public:
    explicit FeatureSpace(FeatureScheme scheme = FeatureScheme::cumulative) : scheme_(scheme) {}

    FeatureScheme scheme() const noexcept { return scheme_; }
    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::uint32_t id) const { return names_.at(id); }

    std::string key(const std::string& lang, const std::string& ngram) const {
        return scheme_ == FeatureScheme::cumulative ? lang + std::string(kLanguageSeparator) + ngram : ngram;
    }

    std::uint32_t add(const std::string& key) {
        const auto [it, fresh] = index_.emplace(key, static_cast<std::uint32_t>(names_.size()));
        if (fresh) names_.push_back(key);
        return it->second;
    }

    std::optional<std::uint32_t> find(const std::string& key) const {
        const auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    FeatureScheme scheme_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::string> names_;
};

/// A column for every unigram and bigram of the given (training) tweets.
inline FeatureSpace build_feature_space(const std::vector<TokenizedTweet>& tweets, FeatureScheme scheme) {
    FeatureSpace space(scheme);
    for (const auto& t : tweets) {
        for (const auto& g : ngrams(t.tokens)) space.add(space.key(t.lang, g));
    }
    return space;
}

/// Active ids of the tweet's known n-grams; unknown n-grams are dropped.
inline SparseBinaryVector vectorize(const TokenizedTweet& tweet, const FeatureSpace& space) {
    SparseBinaryVector v;
    for (const auto& g : ngrams(tweet.tokens)) {
        if (const auto id = space.find(space.key(tweet.lang, g))) v.ids.push_back(*id);
    }
    std::sort(v.ids.begin(), v.ids.end());
    v.ids.erase(std::unique(v.ids.begin(), v.ids.end()), v.ids.end());
    return v;
}

/// "id\tfeature" per line, ids ascending.
inline void write_feature_space(std::ostream& os, const FeatureSpace& space) {
    os << "# xlsent-features 1 scheme=" << to_string(space.scheme()) << " size=" << space.size() << '\n';
    for (std::uint32_t i = 0; i < space.size(); ++i) os << i << '\t' << space.name(i) << '\n';
}

using ClassScores = std::array<double, kNumClasses>;

/// Highest score; ties go to the lowest label code.
inline Polarity argmax_class(const ClassScores& s) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < kNumClasses; ++k) {
        if (s[k] > s[best]) best = k;
    }
    return polarity_from_code(static_cast<int>(best));
}

// ---------------------------------------------------------------------------
// Naive Bayes

enum class NbEvent { multinomial, bernoulli };

struct NbModel {
    NbEvent event = NbEvent::multinomial;
    double alpha = 1.0;
    std::size_t dim = 0;
    std::array<std::size_t, kNumClasses> class_docs{};
    ClassScores log_prior{};
    /// log P(feature | class), one row per class.
    std::array<std::vector<double>, kNumClasses> log_like;
    /// Bernoulli only: log(1 - P(feature | class)).
    std::array<std::vector<double>, kNumClasses> log_absent;
    /// Bernoulli only: sum over features of log_absent.
    ClassScores absent_total{};
};

inline NbModel train_nb(const std::vector<SparseBinaryVector>& docs, const std::vector<Polarity>& labels,
                        std::size_t dim, double alpha = 1.0, NbEvent event = NbEvent::multinomial) {
    if (docs.empty()) throw ArgumentError("naive Bayes needs at least one training document");
    if (docs.size() != labels.size()) throw ArgumentError("documents and labels differ in count");
    if (!(alpha > 0)) throw ArgumentError("alpha must be positive");
    NbModel m;
    m.event = event;
    m.alpha = alpha;
    m.dim = dim;
    std::array<std::vector<double>, kNumClasses> counts;
    for (auto& c : counts) c.assign(dim, 0.0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto k = static_cast<std::size_t>(code(labels[i]));
        ++m.class_docs[k];
        for (auto id : docs[i].ids) {
            if (id >= dim) throw ArgumentError("feature id outside the space");
            counts[k][id] += 1.0;
        }
    }
    const double n = static_cast<double>(docs.size());
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        m.log_prior[k] = m.class_docs[k] ? std::log(static_cast<double>(m.class_docs[k]) / n)
                                         : -std::numeric_limits<double>::infinity();
        m.log_like[k].resize(dim);
        if (event == NbEvent::multinomial) {
            double total = 0;
            for (double c : counts[k]) total += c;
            const double denom = std::log(total + alpha * static_cast<double>(dim));
            for (std::size_t f = 0; f < dim; ++f) m.log_like[k][f] = std::log(counts[k][f] + alpha) - denom;
        } else {
            m.log_absent[k].resize(dim);
            const double denom = static_cast<double>(m.class_docs[k]) + 2.0 * alpha;
            for (std::size_t f = 0; f < dim; ++f) {
                const double p = (counts[k][f] + alpha) / denom;
                m.log_like[k][f] = std::log(p);
                m.log_absent[k][f] = std::log1p(-p);
                m.absent_total[k] += m.log_absent[k][f];
            }
        }
    }
    return m;
}

/// Unnormalized log joint log P(class) + log P(x | class).
inline ClassScores nb_scores(const NbModel& m, const SparseBinaryVector& x) {
    ClassScores s = m.log_prior;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        if (!m.class_docs[k]) continue;
        if (m.event == NbEvent::bernoulli) s[k] += m.absent_total[k];
        for (auto id : x.ids) {
            s[k] += m.log_like[k][id];
            if (m.event == NbEvent::bernoulli) s[k] -= m.log_absent[k][id];
        }
    }
    return s;
}

inline ClassScores nb_posterior(const NbModel& m, const SparseBinaryVector& x) {
    auto s = nb_scores(m, x);
    const double mx = *std::max_element(s.begin(), s.end());
    double z = 0;
    for (auto& v : s) z += (v = std::exp(v - mx));
    for (auto& v : s) v /= z;
    return s;
}

inline Polarity predict_nb(const NbModel& m, const SparseBinaryVector& x) { return argmax_class(nb_scores(m, x)); }

// ---------------------------------------------------------------------------
// Linear SVM

/// Sparse real-valued row: parallel index/value arrays, indices ascending.
struct SparseRow {
    std::vector<std::uint32_t> idx;
    std::vector<double> val;

    static SparseRow binary(const SparseBinaryVector& v) { return {v.ids, std::vector<double>(v.ids.size(), 1.0)}; }
};

struct SvmOptions {
    double C = 1.0;
    /// Stop when every projected gradient in a sweep is below this.
    double tolerance = 1e-4;
    std::size_t max_sweeps = 100000;
};

/// Soft-margin linear classifier sign(w.x + b). The bias is the weight of an
/// appended constant feature and is regularized with w.
struct BinarySvm {
    std::vector<double> w;
    double b = 0.0;
    std::vector<double> alpha;
    /// Dual objective sum(alpha) - |w~|^2 / 2 after each sweep.
    std::vector<double> dual_history;
    bool converged = false;

    double decision(const SparseRow& x) const {
        double s = b;
        for (std::size_t j = 0; j < x.idx.size(); ++j) s += w[x.idx[j]] * x.val[j];
        return s;
    }
};

/// Dual coordinate descent on min 1/2 a'Qa - sum(a), 0 <= a_i <= C, visiting
/// coordinates in index order every sweep. Labels must be +1 or -1.
inline BinarySvm train_binary_svm(const std::vector<SparseRow>& rows, const std::vector<int>& y, std::size_t dim,
                                  const SvmOptions& opt = {}) {
    if (rows.empty()) throw ArgumentError("SVM needs at least one training row");
    if (rows.size() != y.size()) throw ArgumentError("rows and labels differ in count");
    if (!(opt.C > 0)) throw ArgumentError("C must be positive");
    BinarySvm m;
    m.w.assign(dim, 0.0);
    m.alpha.assign(rows.size(), 0.0);
    std::vector<double> qii(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (y[i] != 1 && y[i] != -1) throw ArgumentError("SVM labels must be +1 or -1");
        double sq = 1.0;  // constant feature
        for (std::size_t j = 0; j < rows[i].idx.size(); ++j) {
            if (rows[i].idx[j] >= dim) throw ArgumentError("feature id outside the space");
            sq += rows[i].val[j] * rows[i].val[j];
        }
        qii[i] = sq;
    }
    auto dual = [&] {
        double sum_a = 0, wn = m.b * m.b;
        for (double a : m.alpha) sum_a += a;
        for (double v : m.w) wn += v * v;
        return sum_a - 0.5 * wn;
    };
    for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double worst = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double G = y[i] * m.decision(rows[i]) - 1.0;
            double& a = m.alpha[i];
            double pg = G;
            if (a <= 0.0) pg = std::min(G, 0.0);
            else if (a >= opt.C) pg = std::max(G, 0.0);
            worst = std::max(worst, std::abs(pg));
            if (pg == 0.0) continue;
            const double next = std::clamp(a - G / qii[i], 0.0, opt.C);
            const double step = (next - a) * y[i];
            if (step == 0.0) continue;
            for (std::size_t j = 0; j < rows[i].idx.size(); ++j) m.w[rows[i].idx[j]] += step * rows[i].val[j];
            m.b += step;
            a = next;
        }
        m.dual_history.push_back(dual());
        if (worst < opt.tolerance) {
            m.converged = true;
            break;
        }
    }
    return m;
}

/// Three pairwise classifiers, indexed (0,1), (0,2), (1,2); in each the lower
/// label code is the +1 side.
struct SvmOvoModel {
    std::array<BinarySvm, 3> pairs;
    std::size_t dim = 0;
    static constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
};

inline SvmOvoModel train_svm_ovo(const std::vector<SparseBinaryVector>& docs, const std::vector<Polarity>& labels,
                                 std::size_t dim, const SvmOptions& opt = {}) {
    if (docs.size() != labels.size()) throw ArgumentError("documents and labels differ in count");
    std::array<std::size_t, kNumClasses> seen{};
    for (auto l : labels) ++seen[static_cast<std::size_t>(code(l))];
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        if (!seen[k]) {
            throw ConfigError("class '" + std::string(to_string(polarity_from_code(static_cast<int>(k)))) +
                              "' has no training documents");
        }
    }
    SvmOvoModel m;
    m.dim = dim;
    for (std::size_t p = 0; p < 3; ++p) {
        const auto [lo, hi] = SvmOvoModel::kPairs[p];
        std::vector<SparseRow> rows;
        std::vector<int> y;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            const int c = code(labels[i]);
            if (c != lo && c != hi) continue;
            rows.push_back(SparseRow::binary(docs[i]));
            y.push_back(c == lo ? 1 : -1);
        }
        m.pairs[p] = train_binary_svm(rows, y, dim, opt);
    }
    return m;
}

/// Majority vote of the pairwise classifiers. A zero decision value counts
/// for the lower code; a three-way tie goes to the lowest code.
inline Polarity predict_svm(const SvmOvoModel& m, const SparseBinaryVector& x) {
    const auto row = SparseRow::binary(x);
    ClassScores votes{};
    for (std::size_t p = 0; p < 3; ++p) {
        const auto [lo, hi] = SvmOvoModel::kPairs[p];
        votes[static_cast<std::size_t>(m.pairs[p].decision(row) >= 0.0 ? lo : hi)] += 1.0;
    }
    return argmax_class(votes);
}

namespace detail {
inline std::string real17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace detail

/// Text dump: header, then per class "prior <code> <log prior>" and one
/// "like <code> <feature id> <log likelihood>" line per feature.
inline void write_nb_model(std::ostream& os, const NbModel& m) {
    os << "# xlsent-nb 1 event=" << (m.event == NbEvent::multinomial ? "multinomial" : "bernoulli")
       << " alpha=" << detail::real17(m.alpha) << " dim=" << m.dim << '\n';
    for (std::size_t k = 0; k < kNumClasses; ++k) {
        os << "prior " << k << ' ' << detail::real17(m.log_prior[k]) << '\n';
        for (std::size_t f = 0; f < m.dim && m.class_docs[k]; ++f) {
            os << "like " << k << ' ' << f << ' ' << detail::real17(m.log_like[k][f]) << '\n';
        }
    }
}

/// Text dump: per pair "pair <lo> <hi> bias <b>" followed by non-zero weights "<id> <w>".
inline void write_svm_model(std::ostream& os, const SvmOvoModel& m) {
    os << "# xlsent-svm-ovo 1 dim=" << m.dim << '\n';
    for (std::size_t p = 0; p < 3; ++p) {
        const auto [lo, hi] = SvmOvoModel::kPairs[p];
        os << "pair " << lo << ' ' << hi << " bias " << detail::real17(m.pairs[p].b) << '\n';
        for (std::size_t f = 0; f < m.dim; ++f) {
            if (m.pairs[p].w[f] != 0.0) os << f << ' ' << detail::real17(m.pairs[p].w[f]) << '\n';
        }
    }
}

}  // namespace xlsent

#endif  // XLSENT_BASELINES_HPP
