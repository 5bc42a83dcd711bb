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

#ifndef XLSENT_ALIGN_HPP
#define XLSENT_ALIGN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "xlsent/embeddings.hpp"
#include "xlsent/error.hpp"
#include "xlsent/rng.hpp"

namespace xlsent {

// ---------------------------------------------------------------------------
// Pivot pairs

struct DictionaryEntry {
    std::string src;
    std::string tgt;
};

/// Bilingual lexicon in file order.
using BilingualDictionary = std::vector<DictionaryEntry>;

/// "src_word\ttgt_word" per line; `#` starts a comment line.
inline BilingualDictionary read_dictionary(std::istream& in) {
    BilingualDictionary dict;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
            throw ParseError("expected src_word<TAB>tgt_word", lineno);
        }
        dict.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return dict;
}

inline BilingualDictionary load_dictionary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open dictionary '" + path + "'");
    return read_dictionary(in);
}

struct PivotPair {
    std::string src;
    std::string tgt;
    friend bool operator==(const PivotPair&, const PivotPair&) = default;
};

struct PivotPairSet {
    std::string src_lang;
    std::string tgt_lang;
    std::vector<PivotPair> train;  // each split in descending pivot frequency
    std::vector<PivotPair> test;

    std::size_t size() const noexcept { return train.size() + test.size(); }
};

/// Which side of the dictionary the frequency ranks refer to. Ranking the
/// target side reproduces "top-K words of the pivot language, translated".
enum class PivotSide { source, target };

struct PivotSelection {
    std::size_t k = 3500;
    std::size_t train_count = 3000;
    std::uint64_t seed = 0;
    PivotSide ranked_side = PivotSide::target;
};

/// Walk the ranked words from most frequent down, keeping those with a
/// dictionary entry (first entry wins) that `usable` accepts, until `k` pairs
/// are found; then split them into train/test by a seeded shuffle.
inline PivotPairSet select_pivot_pairs(
    const FrequencyRanks& ranks, const BilingualDictionary& dictionary, const PivotSelection& sel,
    std::string src_lang, std::string tgt_lang,
    const std::function<bool(const PivotPair&)>& usable = {}) {
    if (sel.k == 0) throw ArgumentError("pivot count must be positive");
    if (sel.train_count > sel.k) throw ArgumentError("train_count exceeds pivot count");

    std::unordered_map<std::string, std::string> lookup;
    for (const auto& e : dictionary) {
        if (sel.ranked_side == PivotSide::source) {
            lookup.emplace(e.src, e.tgt);
        } else {
            lookup.emplace(e.tgt, e.src);
        }
    }
    std::vector<std::pair<std::size_t, std::string>> ranked;
    ranked.reserve(ranks.size());
    for (const auto& [w, r] : ranks) ranked.emplace_back(r, w);
    std::sort(ranked.begin(), ranked.end());

    std::vector<PivotPair> chosen;
    std::unordered_set<std::string> used_src;
    for (const auto& [rank, word] : ranked) {
        if (chosen.size() == sel.k) break;
        const auto it = lookup.find(word);
        if (it == lookup.end()) continue;
        PivotPair p = sel.ranked_side == PivotSide::source ? PivotPair{word, it->second}
                                                           : PivotPair{it->second, word};
        // A source word serves as pivot once; repeated targets are fine.
        if (used_src.contains(p.src) || (usable && !usable(p))) continue;
        used_src.insert(p.src);
        chosen.push_back(std::move(p));
    }
    if (chosen.size() < sel.k) {
        const auto shortfall = sel.k - chosen.size();
        throw CoverageError("dictionary covers only " + std::to_string(chosen.size()) + " of " +
                                std::to_string(sel.k) + " pivot words (shortfall " +
                                std::to_string(shortfall) + ")",
                            shortfall);
    }

    std::vector<std::size_t> idx(chosen.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng = Rng::stream(sel.seed, 0x9170);
    rng.shuffle(idx);
    std::vector<bool> is_train(chosen.size(), false);
    for (std::size_t i = 0; i < sel.train_count; ++i) is_train[idx[i]] = true;

    PivotPairSet set{std::move(src_lang), std::move(tgt_lang), {}, {}};
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        (is_train[i] ? set.train : set.test).push_back(chosen[i]);
    }
    return set;
}

/// Stack pair vectors as rows: X from the source table, Z from the target.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> resolve_pairs(const std::vector<PivotPair>& pairs,
                                                                 const EmbeddingTable& src,
                                                                 const EmbeddingTable& tgt) {
    if (src.dim() != tgt.dim()) throw ArgumentError("source and target tables differ in dimension");
    const auto n = static_cast<Eigen::Index>(pairs.size());
    const auto d = static_cast<Eigen::Index>(src.dim());
    Eigen::MatrixXd X(n, d), Z(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        X.row(i) = src.at(pairs[static_cast<std::size_t>(i)].src);
        Z.row(i) = tgt.at(pairs[static_cast<std::size_t>(i)].tgt);
    }
    return {std::move(X), std::move(Z)};
}

// ---------------------------------------------------------------------------
// Translation matrix

/// Row-vector convention: a source vector x maps to x^T W, and a vocabulary
/// matrix Z maps to Z W.
struct TranslationMatrix {
    std::string src_lang;
    std::string tgt_lang;
    Eigen::MatrixXd W;
    double fit_residual = 0.0;
    double ridge_lambda = 0.0;   // > 0 when the ridge fallback was used
    bool underdetermined = false;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(W.rows()); }

    static TranslationMatrix identity(std::string src, std::string tgt, std::size_t dim) {
        const auto d = static_cast<Eigen::Index>(dim);
        return {std::move(src), std::move(tgt), Eigen::MatrixXd::Identity(d, d), 0.0, 0.0, false};
    }
};

enum class AlignSolver { normal_equations, gradient_descent };

struct FitOptions {
    AlignSolver solver = AlignSolver::normal_equations;
    double ridge_lambda = 1e-8;
    /// Reciprocal condition estimate of X^T X below which ridge is applied.
    double singular_rcond = 1e-12;
    std::size_t max_iterations = 200000;
    double gradient_tolerance = 1e-12;
};

/// Sum over rows of ||x_i^T W - z_i||^2.
inline double translation_objective(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z, const Eigen::MatrixXd& W) {
    return (X * W - Z).squaredNorm();
}

/// Least-squares W minimizing sum ||x_i^T W - z_i||^2 over row pairs of X, Z.
inline TranslationMatrix fit_translation_matrix(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
                                                std::string src_lang = {}, std::string tgt_lang = {},
                                                const FitOptions& opt = {}) {
    if (X.rows() == 0) throw ArgumentError("no pivot pairs to fit");
    if (X.rows() != Z.rows() || X.cols() != Z.cols()) {
        throw ArgumentError("source and target pair matrices differ in shape");
    }
    const Eigen::Index d = X.cols();
    TranslationMatrix tm{std::move(src_lang), std::move(tgt_lang), {}, 0.0, 0.0, X.rows() < d};

    const Eigen::MatrixXd gram = X.transpose() * X;
    const Eigen::MatrixXd rhs = X.transpose() * Z;

    if (opt.solver == AlignSolver::normal_equations) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        const bool ok = ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > opt.singular_rcond;
        if (ok) {
            tm.W = ldlt.solve(rhs);
        } else {
            tm.ridge_lambda = opt.ridge_lambda;
            const Eigen::MatrixXd reg = gram + opt.ridge_lambda * Eigen::MatrixXd::Identity(d, d);
            tm.W = reg.ldlt().solve(rhs);
        }
    } else {
        // Gradient descent on the same objective with step 1/L, L = 2 lambda_max(X^T X).
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        const double lmax = eig.eigenvalues().maxCoeff();
        if (!(lmax > 0)) throw ArgumentError("pivot vectors are all zero");
        const double step = 1.0 / (2.0 * lmax);
        tm.W = Eigen::MatrixXd::Zero(d, d);
        const double scale = std::max(1.0, rhs.norm());
        for (std::size_t it = 0; it < opt.max_iterations; ++it) {
            const Eigen::MatrixXd grad = 2.0 * (gram * tm.W - rhs);
            if (grad.norm() <= opt.gradient_tolerance * scale) break;
            tm.W -= step * grad;
        }
    }
    if (!tm.W.allFinite()) throw Error("translation matrix fit produced non-finite values");
    tm.fit_residual = translation_objective(X, Z, tm.W);
    return tm;
}

inline TranslationMatrix fit_translation_matrix(const std::vector<PivotPair>& pairs, const EmbeddingTable& src,
                                                const EmbeddingTable& tgt, const FitOptions& opt = {}) {
    const auto [X, Z] = resolve_pairs(pairs, src, tgt);
    return fit_translation_matrix(X, Z, src.lang(), tgt.lang(), opt);
}

/// W1 followed by W2.
inline TranslationMatrix compose(const TranslationMatrix& first, const TranslationMatrix& second) {
    if (first.tgt_lang != second.src_lang || first.dim() != second.dim()) {
        throw ArgumentError("translation matrices do not compose");
    }
    return {first.src_lang, second.tgt_lang, first.W * second.W, 0.0, 0.0, false};
}

inline VocabularyMatrix apply_translation(const VocabularyMatrix& Z, const TranslationMatrix& W) {
    if (static_cast<std::size_t>(Z.Z.cols()) != W.dim()) {
        throw ArgumentError("vocabulary dim " + std::to_string(Z.Z.cols()) + " does not match matrix side " +
                            std::to_string(W.dim()));
    }
    if (Z.space != W.src_lang) {
        throw ArgumentError("vocabulary lives in '" + Z.space + "' space, matrix maps from '" + W.src_lang + "'");
    }
    return {Z.lang, W.tgt_lang, Z.words, Z.Z * W.W};
}

// Text format:
//   xlsent-translation-matrix 1
//   src <lang>
//   tgt <lang>
//   dim <d>
//   residual <real>
//   ridge <real>
//   <d lines of d reals, row-major>
inline void write_translation_matrix(std::ostream& os, const TranslationMatrix& tm) {
    os << "xlsent-translation-matrix 1\n"
       << "src " << tm.src_lang << "\ntgt " << tm.tgt_lang << "\ndim " << tm.dim() << '\n';
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", tm.fit_residual);
    os << "residual " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", tm.ridge_lambda);
    os << "ridge " << buf << '\n';
    for (Eigen::Index i = 0; i < tm.W.rows(); ++i) {
        for (Eigen::Index j = 0; j < tm.W.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", tm.W(i, j));
            os << (j ? " " : "") << buf;
        }
        os << '\n';
    }
}

inline TranslationMatrix read_translation_matrix(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::string {
        if (!std::getline(in, line)) throw ParseError("unexpected end of matrix file", lineno + 1);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    auto field = [&](const std::string& key) {
        const auto l = next();
        if (l.rfind(key + " ", 0) != 0) throw ParseError("expected '" + key + "'", lineno);
        return l.substr(key.size() + 1);
    };
    if (next() != "xlsent-translation-matrix 1") throw ParseError("not a translation matrix file", 1);
    TranslationMatrix tm;
    tm.src_lang = field("src");
    tm.tgt_lang = field("tgt");
    std::size_t dim = 0;
    try {
        dim = std::stoul(field("dim"));
        tm.fit_residual = std::stod(field("residual"));
        tm.ridge_lambda = std::stod(field("ridge"));
    } catch (const std::logic_error&) {
        throw ParseError("bad numeric header field", lineno);
    }
    const auto d = static_cast<Eigen::Index>(dim);
    tm.W.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const std::string row = next();
        const auto fields = detail::split_spaces(row);
        if (fields.size() != dim) throw ParseError("expected " + std::to_string(dim) + " values", lineno);
        for (Eigen::Index j = 0; j < d; ++j) {
            if (!detail::parse_double(fields[static_cast<std::size_t>(j)], tm.W(i, j))) {
                throw ParseError("bad number", lineno);
            }
        }
    }
    return tm;
}

inline TranslationMatrix load_translation_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open translation matrix '" + path + "'");
    return read_translation_matrix(in);
}

// ---------------------------------------------------------------------------
// Distance report

struct DistanceReport {
    std::size_t pairs = 0;
    double euclidean_sum_before = 0.0;
    double euclidean_sum_after = 0.0;
    double cosine_sum_before = 0.0;
    double cosine_sum_after = 0.0;
};

/// 1 - cos(u, v); a zero-norm vector contributes distance 1.
inline double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return 1.0;
    return std::clamp(1.0 - u.dot(v) / (nu * nv), 0.0, 2.0);
}

/// Distance sums over held-out pairs, before (x_i vs z_i) and after (x_i^T W vs z_i) mapping.
inline DistanceReport alignment_report(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z, const TranslationMatrix& tm) {
    if (X.rows() != Z.rows() || X.cols() != Z.cols() || static_cast<std::size_t>(X.cols()) != tm.dim()) {
        throw ArgumentError("pair matrices do not match the translation matrix");
    }
    DistanceReport r;
    r.pairs = static_cast<std::size_t>(X.rows());
    const Eigen::MatrixXd mapped = X * tm.W;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd x = X.row(i).transpose();
        const Eigen::VectorXd z = Z.row(i).transpose();
        const Eigen::VectorXd m = mapped.row(i).transpose();
        r.euclidean_sum_before += (x - z).norm();
        r.euclidean_sum_after += (m - z).norm();
        r.cosine_sum_before += cosine_distance(x, z);
        r.cosine_sum_after += cosine_distance(m, z);
    }
    return r;
}

inline DistanceReport alignment_report(const std::vector<PivotPair>& test_pairs, const EmbeddingTable& src,
                                       const EmbeddingTable& tgt, const TranslationMatrix& tm) {
    const auto [X, Z] = resolve_pairs(test_pairs, src, tgt);
    return alignment_report(X, Z, tm);
}

}  // namespace xlsent

#endif  // XLSENT_ALIGN_HPP
