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

#ifndef XLSENT_NN_LSTM_HPP
#define XLSENT_NN_LSTM_HPP

#include <vector>

#include <Eigen/Dense>

#include "xlsent/error.hpp"
#include "xlsent/nn/activation.hpp"
#include "xlsent/nn/params.hpp"

namespace xlsent::nn {

struct LstmShape {
    Eigen::Index input = 100;
    Eigen::Index hidden = 100;
    Eigen::Index classes = 3;
    /// Activation of the candidate cell state. Standard cells use tanh;
    /// sigmoid follows the gate-style formula taken literally.
    Activation candidate = Activation::tanh;
};

/// Single-layer LSTM over column-vector inputs plus the softmax layer on h_n.
struct LstmParams {
    // Block order inside `params`.
    enum : std::size_t { Wi, Wc, Wf, Wo, Ui, Uc, Uf, Uo, bi, bc, bf, bo, Ws, bs, kBlocks };

    LstmShape shape;
    ParamSet params;

    LstmParams() = default;
    explicit LstmParams(const LstmShape& s) : shape(s) {
        const auto d = s.input, h = s.hidden;
        if (d <= 0 || h <= 0 || s.classes <= 0) throw ArgumentError("LSTM dimensions must be positive");
        for (const char* n : {"W_i", "W_c", "W_f", "W_o"}) params.add(n, h, d);
        for (const char* n : {"U_i", "U_c", "U_f", "U_o"}) params.add(n, h, h);
        for (const char* n : {"b_i", "b_c", "b_f", "b_o"}) params.add(n, h, 1);
        params.add("W_s", s.classes, h);
        params.add("b_s", s.classes, 1);
    }

    /// Glorot-uniform weights, zero biases except the forget gate.
    void initialize(Rng& rng, double forget_bias = 1.0) {
        for (std::size_t b : {Wi, Wc, Wf, Wo, Ui, Uc, Uf, Uo, Ws}) glorot_uniform(params.mat(b), rng);
        for (std::size_t b : {bi, bc, bo, bs}) params.vec(b).setZero();
        params.vec(bf).setConstant(forget_bias);
    }
};

struct LstmStep {
    Eigen::VectorXd i, f, o, g;  // gates and candidate C~_t
    Eigen::VectorXd c, h;
};

inline LstmStep lstm_cell_step(const Eigen::VectorXd& x, const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
                               const LstmParams& p) {
    const auto& P = p.params;
    auto gate = [&](std::size_t W, std::size_t U, std::size_t b) -> Eigen::VectorXd {
        return P.mat(W) * x + P.mat(U) * h_prev + P.vec(b);
    };
    LstmStep s;
    s.i = apply(Activation::sigmoid, gate(LstmParams::Wi, LstmParams::Ui, LstmParams::bi).array()).matrix();
    s.g = apply(p.shape.candidate, gate(LstmParams::Wc, LstmParams::Uc, LstmParams::bc).array()).matrix();
    s.f = apply(Activation::sigmoid, gate(LstmParams::Wf, LstmParams::Uf, LstmParams::bf).array()).matrix();
    s.c = s.i.cwiseProduct(s.g) + s.f.cwiseProduct(c_prev);
    s.o = apply(Activation::sigmoid, gate(LstmParams::Wo, LstmParams::Uo, LstmParams::bo).array()).matrix();
    s.h = s.o.cwiseProduct(s.c.array().tanh().matrix());
    return s;
}

/// Every step of a run over the first `length` columns of X.
struct LstmTrace {
    std::vector<LstmStep> steps;
    const Eigen::VectorXd& last_hidden() const { return steps.back().h; }
};

inline LstmTrace lstm_run(const Eigen::MatrixXd& X, Eigen::Index length, const LstmParams& p) {
    if (length <= 0) throw ArgumentError("LSTM input must have at least one token");
    if (length > X.cols() || X.rows() != p.shape.input) throw ArgumentError("LSTM input shape mismatch");
    LstmTrace tr;
    tr.steps.reserve(static_cast<std::size_t>(length));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(p.shape.hidden);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(p.shape.hidden);
    for (Eigen::Index t = 0; t < length; ++t) {
        tr.steps.push_back(lstm_cell_step(X.col(t), h, c, p));
        h = tr.steps.back().h;
        c = tr.steps.back().c;
    }
    return tr;
}

/// Logits of the softmax layer on h_n, without dropout.
inline Eigen::VectorXd lstm_forward(const Eigen::MatrixXd& X, const LstmParams& p) {
    const auto tr = lstm_run(X, X.cols(), p);
    return p.params.mat(LstmParams::Ws) * tr.last_hidden() + p.params.vec(LstmParams::bs);
}

/// Back-propagates dL/dh_n through time, accumulating into `grads` (same
/// layout as p.params) and optionally into dX (d x length).
inline void lstm_backward(const Eigen::MatrixXd& X, const LstmTrace& tr, const LstmParams& p,
                          const Eigen::VectorXd& dh_last, ParamSet& grads, Eigen::MatrixXd* dX = nullptr) {
    const auto& P = p.params;
    const auto H = p.shape.hidden;
    Eigen::VectorXd dh = dh_last;
    Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(H);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(H);

    for (auto t = static_cast<Eigen::Index>(tr.steps.size()) - 1; t >= 0; --t) {
        const auto& s = tr.steps[static_cast<std::size_t>(t)];
        const Eigen::VectorXd& h_prev = t > 0 ? tr.steps[static_cast<std::size_t>(t - 1)].h : zero;
        const Eigen::VectorXd& c_prev = t > 0 ? tr.steps[static_cast<std::size_t>(t - 1)].c : zero;
        const Eigen::ArrayXd tc = s.c.array().tanh();

        const Eigen::ArrayXd dov = dh.array() * tc;
        const Eigen::ArrayXd dc = dc_next.array() + dh.array() * s.o.array() * (1.0 - tc.square());
        const Eigen::VectorXd da_i = (dc * s.g.array() * s.i.array() * (1.0 - s.i.array())).matrix();
        const Eigen::VectorXd da_g =
            (dc * s.i.array() * derivative_from_output(p.shape.candidate, s.g.array()).col(0)).matrix();
        const Eigen::VectorXd da_f = (dc * c_prev.array() * s.f.array() * (1.0 - s.f.array())).matrix();
        const Eigen::VectorXd da_o = (dov * s.o.array() * (1.0 - s.o.array())).matrix();

        const Eigen::VectorXd x = X.col(t);
        const std::pair<std::size_t, const Eigen::VectorXd*> gates[] = {
            {0, &da_i}, {1, &da_g}, {2, &da_f}, {3, &da_o}};
        Eigen::VectorXd dh_prev = Eigen::VectorXd::Zero(H);
        for (const auto& [k, da] : gates) {
            grads.mat(LstmParams::Wi + k).noalias() += *da * x.transpose();
            grads.mat(LstmParams::Ui + k).noalias() += *da * h_prev.transpose();
            grads.vec(LstmParams::bi + k) += *da;
            dh_prev.noalias() += P.mat(LstmParams::Ui + k).transpose() * *da;
            if (dX) dX->col(t).noalias() += P.mat(LstmParams::Wi + k).transpose() * *da;
        }
        dc_next = (dc * s.f.array()).matrix();
        dh = dh_prev;
    }
}

}  // namespace xlsent::nn

#endif  // XLSENT_NN_LSTM_HPP
