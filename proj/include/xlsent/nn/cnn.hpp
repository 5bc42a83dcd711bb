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

#ifndef XLSENT_NN_CNN_HPP
#define XLSENT_NN_CNN_HPP

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/error.hpp"
#include "xlsent/nn/activation.hpp"
#include "xlsent/nn/params.hpp"

namespace xlsent::nn {

struct CnnShape {
    Eigen::Index input = 100;
    std::vector<Eigen::Index> windows{3, 4, 5};
    Eigen::Index filters_per_window = 100;
    Eigen::Index classes = 3;
    Activation activation = Activation::tanh;

    Eigen::Index total_filters() const { return filters_per_window * static_cast<Eigen::Index>(windows.size()); }
    Eigen::Index max_window() const { return *std::max_element(windows.begin(), windows.end()); }
};

/// A tweet stored one token per column (dim x max_len); columns at and
/// beyond `length` are zero padding.
struct PaddedTweetMatrix {
    Eigen::MatrixXd X;
    Eigen::Index length = 0;

    Eigen::Index max_len() const noexcept { return X.cols(); }
};

inline PaddedTweetMatrix pad_tweet(const Eigen::MatrixXd& tokens, Eigen::Index max_len) {
    PaddedTweetMatrix p{Eigen::MatrixXd::Zero(tokens.rows(), std::max(max_len, tokens.cols())), tokens.cols()};
    p.X.leftCols(tokens.cols()) = tokens;
    return p;
}

/// One filter bank per window size h: an (n_filters x h*dim) matrix whose
/// rows are the flattened filters w, plus a bias per filter. The softmax
/// layer reads the concatenated max-pooled features.
struct CnnParams {
    CnnShape shape;
    ParamSet params;

    CnnParams() = default;
    explicit CnnParams(const CnnShape& s) : shape(s) {
        if (s.input <= 0 || s.filters_per_window <= 0 || s.windows.empty() || s.classes <= 0) {
            throw ArgumentError("CNN dimensions must be positive");
        }
        for (auto h : s.windows) {
            if (h <= 0) throw ArgumentError("window sizes must be positive");
            params.add("F_" + std::to_string(h), s.filters_per_window, h * s.input);
            params.add("b_" + std::to_string(h), s.filters_per_window, 1);
        }
        params.add("W_s", s.classes, s.total_filters());
        params.add("b_s", s.classes, 1);
    }

    std::size_t filter_block(std::size_t w) const { return 2 * w; }
    std::size_t bias_block(std::size_t w) const { return 2 * w + 1; }
    std::size_t softmax_weight() const { return 2 * shape.windows.size(); }
    std::size_t softmax_bias() const { return 2 * shape.windows.size() + 1; }

    void initialize(Rng& rng) {
        for (std::size_t w = 0; w < shape.windows.size(); ++w) {
            glorot_uniform(params.mat(filter_block(w)), rng);
            params.vec(bias_block(w)).setZero();
        }
        glorot_uniform(params.mat(softmax_weight()), rng);
        params.vec(softmax_bias()).setZero();
    }
};

/// Feature maps and pooled maxima of one forward pass.
struct CnnTrace {
    std::vector<Eigen::MatrixXd> maps;       // per window size: n_filters x n_windows, post-activation
    Eigen::VectorXd pooled;                  // c_max of every filter, window-major
    std::vector<Eigen::Index> argmax;        // first maximizing position per filter
};

namespace detail {

/// Column j is the concatenation x_j (+) ... (+) x_{j+h-1}: a strided view of
/// the column-major token matrix, no copy.
inline Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> windows_view(const Eigen::MatrixXd& X, Eigen::Index h) {
    return {X.data(), h * X.rows(), X.cols() - h + 1, Eigen::OuterStride<>(X.rows())};
}

}  // namespace detail

/// Convolution over every window of the padded matrix, then max-pooling.
inline CnnTrace cnn_features(const PaddedTweetMatrix& in, const CnnParams& p) {
    const auto& s = p.shape;
    if (in.X.rows() != s.input) throw ArgumentError("CNN input dim mismatch");
    if (in.max_len() < s.max_window()) {
        throw ConfigError("max_len " + std::to_string(in.max_len()) + " is shorter than the largest window " +
                          std::to_string(s.max_window()));
    }
    CnnTrace tr;
    tr.pooled.resize(s.total_filters());
    tr.argmax.resize(static_cast<std::size_t>(s.total_filters()));
    for (std::size_t w = 0; w < s.windows.size(); ++w) {
        const auto h = s.windows[w];
        Eigen::MatrixXd pre = p.params.mat(p.filter_block(w)) * detail::windows_view(in.X, h);
        pre.colwise() += p.params.vec(p.bias_block(w));
        tr.maps.push_back(apply(s.activation, pre.array()).matrix());
        const auto& m = tr.maps.back();
        for (Eigen::Index f = 0; f < m.rows(); ++f) {
            Eigen::Index best = 0;
            for (Eigen::Index j = 1; j < m.cols(); ++j) {
                if (m(f, j) > m(f, best)) best = j;
            }
            const auto k = static_cast<Eigen::Index>(w) * s.filters_per_window + f;
            tr.pooled[k] = m(f, best);
            tr.argmax[static_cast<std::size_t>(k)] = best;
        }
    }
    return tr;
}

/// Logits; `dropout_mask` (already scaled by 1/(1-rate)) multiplies the
/// pooled vector when given.
inline Eigen::VectorXd cnn_forward(const PaddedTweetMatrix& in, const CnnParams& p,
                                   const Eigen::VectorXd* dropout_mask = nullptr) {
    const auto tr = cnn_features(in, p);
    const Eigen::VectorXd z = dropout_mask ? Eigen::VectorXd(tr.pooled.cwiseProduct(*dropout_mask)) : tr.pooled;
    return p.params.mat(p.softmax_weight()) * z + p.params.vec(p.softmax_bias());
}

/// Routes dL/d(pooled) to each filter's argmax window.
inline void cnn_backward(const PaddedTweetMatrix& in, const CnnTrace& tr, const CnnParams& p,
                         const Eigen::VectorXd& dpooled, ParamSet& grads, Eigen::MatrixXd* dX = nullptr) {
    const auto& s = p.shape;
    const auto d = s.input;
    for (std::size_t w = 0; w < s.windows.size(); ++w) {
        const auto h = s.windows[w];
        auto F = p.params.mat(p.filter_block(w));
        auto dF = grads.mat(p.filter_block(w));
        auto db = grads.vec(p.bias_block(w));
        const auto& m = tr.maps[w];
        for (Eigen::Index f = 0; f < s.filters_per_window; ++f) {
            const auto k = static_cast<Eigen::Index>(w) * s.filters_per_window + f;
            const auto j = tr.argmax[static_cast<std::size_t>(k)];
            const double y = m(f, j);
            const double dpre = dpooled[k] * derivative_from_output(s.activation, y);
            if (dpre == 0.0) continue;
            const Eigen::Map<const Eigen::VectorXd> window(in.X.data() + j * d, h * d);
            dF.row(f) += dpre * window.transpose();
            db[f] += dpre;
            if (dX) {
                Eigen::Map<Eigen::VectorXd> dwin(dX->data() + j * d, h * d);
                dwin += dpre * F.row(f).transpose();
            }
        }
    }
}

}  // namespace xlsent::nn

#endif  // XLSENT_NN_CNN_HPP
