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

#ifndef XLSENT_NN_NETWORK_HPP
#define XLSENT_NN_NETWORK_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/corpus.hpp"
#include "xlsent/error.hpp"
#include "xlsent/nn/activation.hpp"
#include "xlsent/nn/cnn.hpp"
#include "xlsent/nn/lstm.hpp"
#include "xlsent/nn/params.hpp"
#include "xlsent/rng.hpp"

namespace xlsent::nn {

enum class ModelKind { lstm, cnn };

inline std::string to_string(ModelKind k) { return k == ModelKind::lstm ? "lstm" : "cnn"; }

inline std::optional<ModelKind> parse_model_kind(std::string_view s) {
    if (s == "lstm") return ModelKind::lstm;
    if (s == "cnn") return ModelKind::cnn;
    return std::nullopt;
}

/// One training or evaluation example. The LSTM reads the first `length`
/// columns; the CNN convolves over all of them, padding included.
struct Sample {
    PaddedTweetMatrix input;
    Polarity label = Polarity::neutral;
};

/// Either architecture behind one interface: a feature extractor (h_n or the
/// pooled c_max vector) followed by dropout and the softmax layer.
class Network {
public:
    Network() = default;
    explicit Network(LstmParams p) : arch_(std::move(p)) {}
    explicit Network(CnnParams p) : arch_(std::move(p)) {}

    ModelKind kind() const noexcept { return arch_.index() == 0 ? ModelKind::lstm : ModelKind::cnn; }
    const LstmParams& lstm() const { return std::get<LstmParams>(arch_); }
    const CnnParams& cnn() const { return std::get<CnnParams>(arch_); }

    ParamSet& params() { return std::visit([](auto& a) -> ParamSet& { return a.params; }, arch_); }
    const ParamSet& params() const {
        return std::visit([](const auto& a) -> const ParamSet& { return a.params; }, arch_);
    }

    Eigen::Index input_dim() const {
        return std::visit([](const auto& a) { return a.shape.input; }, arch_);
    }
    Eigen::Index feature_dim() const {
        return kind() == ModelKind::lstm ? lstm().shape.hidden : cnn().shape.total_filters();
    }
    /// Shortest padded length the architecture accepts.
    Eigen::Index min_len() const { return kind() == ModelKind::lstm ? 1 : cnn().shape.max_window(); }

    std::size_t head_weight() const {
        return kind() == ModelKind::lstm ? std::size_t{LstmParams::Ws} : cnn().softmax_weight();
    }
    std::size_t head_bias() const {
        return kind() == ModelKind::lstm ? std::size_t{LstmParams::bs} : cnn().softmax_bias();
    }

    /// Logits without dropout.
    Eigen::VectorXd logits(const PaddedTweetMatrix& in) const {
        const auto& P = params();
        return P.mat(head_weight()) * features(in) + P.vec(head_bias());
    }

    Eigen::VectorXd features(const PaddedTweetMatrix& in) const {
        if (kind() == ModelKind::lstm) return lstm_run(in.X, in.length, lstm()).last_hidden();
        return cnn_features(in, cnn()).pooled;
    }

private:
    std::variant<LstmParams, CnnParams> arch_;
};

/// Inverted-dropout mask: each entry is 0 with probability `rate`, else 1/(1-rate).
inline Eigen::VectorXd dropout_mask(Eigen::Index n, double rate, std::uint64_t seed) {
    Eigen::VectorXd m(n);
    if (rate <= 0.0) return m.setOnes();
    Rng rng(seed);
    const double keep = 1.0 / (1.0 - rate);
    for (Eigen::Index i = 0; i < n; ++i) m[i] = rng.uniform() < rate ? 0.0 : keep;
    return m;
}

/// Index of the largest probability; ties go to the lowest label code.
inline Polarity argmax_polarity(const Eigen::VectorXd& probs) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < probs.size(); ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return polarity_from_code(static_cast<int>(best));
}

struct LossAndGradients {
    double loss = 0.0;                         // mean cross-entropy over the batch
    ParamSet grads;                            // d loss / d params
    std::vector<Eigen::MatrixXd> input_grads;  // d loss / d input per sample, when requested
};

/// Mean softmax cross-entropy of a batch and its exact gradient. Sample j
/// draws its dropout mask from derive_seed(dropout_seed, j); the mask is a
/// constant of the differentiated function.
inline LossAndGradients loss_and_gradients(const Network& net, std::span<const Sample> batch, double dropout_rate,
                                           std::uint64_t dropout_seed, bool want_input_grads = false) {
    if (batch.empty()) throw ArgumentError("empty batch");
    const auto& P = net.params();
    LossAndGradients out{0.0, P.zeros_like(), {}};
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    const auto Ws = P.mat(net.head_weight());
    const auto bs = P.vec(net.head_bias());

    for (std::size_t j = 0; j < batch.size(); ++j) {
        const auto& s = batch[j];
        const auto mask = dropout_mask(net.feature_dim(), dropout_rate, derive_seed(dropout_seed, j));

        std::optional<LstmTrace> ltr;
        std::optional<CnnTrace> ctr;
        Eigen::VectorXd feat;
        if (net.kind() == ModelKind::lstm) {
            ltr = lstm_run(s.input.X, s.input.length, net.lstm());
            feat = ltr->last_hidden();
        } else {
            ctr = cnn_features(s.input, net.cnn());
            feat = ctr->pooled;
        }
        const Eigen::VectorXd z = feat.cwiseProduct(mask);
        const Eigen::VectorXd logits = Ws * z + bs;
        const auto y = static_cast<Eigen::Index>(code(s.label));
        out.loss += cross_entropy(logits, y) * inv_n;

        Eigen::VectorXd dlogits = softmax(logits);
        dlogits[y] -= 1.0;
        dlogits *= inv_n;
        out.grads.mat(net.head_weight()).noalias() += dlogits * z.transpose();
        out.grads.vec(net.head_bias()) += dlogits;
        const Eigen::VectorXd dfeat = (Ws.transpose() * dlogits).cwiseProduct(mask);

        Eigen::MatrixXd dX;
        if (want_input_grads) dX = Eigen::MatrixXd::Zero(s.input.X.rows(), s.input.X.cols());
        if (ltr) {
            lstm_backward(s.input.X, *ltr, net.lstm(), dfeat, out.grads, want_input_grads ? &dX : nullptr);
        } else {
            cnn_backward(s.input, *ctr, net.cnn(), dfeat, out.grads, want_input_grads ? &dX : nullptr);
        }
        if (want_input_grads) out.input_grads.push_back(std::move(dX));
    }
    return out;
}

}  // namespace xlsent::nn

#endif  // XLSENT_NN_NETWORK_HPP
