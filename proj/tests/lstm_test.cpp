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

#include <cmath>

#include <gtest/gtest.h>

#include "support/gradcheck.hpp"
#include "xlsent/nn/lstm.hpp"
#include "xlsent/nn/network.hpp"

namespace xlsent::nn {
namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LstmParams scalar_cell(Activation cand) {
    LstmParams p({1, 1, 3, cand});  // all zero
    return p;
}

TEST(LstmCell, ZeroParamsGiveHalfGatesAndZeroState) {
    LstmParams p({4, 3, 3, Activation::tanh});
    const auto s = lstm_cell_step(Eigen::Vector4d(1, -2, 3, 0.5), Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), p);
    for (const auto* v : {&s.i, &s.f, &s.o}) EXPECT_EQ(*v, Eigen::Vector3d::Constant(0.5));
    EXPECT_EQ(s.g, Eigen::Vector3d::Zero());
    EXPECT_EQ(s.c, Eigen::Vector3d::Zero());
    EXPECT_EQ(s.h, Eigen::Vector3d::Zero());
}

TEST(LstmCell, ScalarInputGateOnly) {
    auto p = scalar_cell(Activation::tanh);
    p.params.mat(LstmParams::Wi)(0, 0) = 1.0;
    const auto s = lstm_cell_step(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), p);
    EXPECT_NEAR(s.i[0], 0.7310585786300049, 1e-12);
    EXPECT_EQ(s.c[0], 0.0);
    EXPECT_EQ(s.h[0], 0.0);
}

// Scalar run of the six gate equations written out by hand.
TEST(LstmCell, ScalarTwoStepHandOracle) {
    for (auto cand : {Activation::tanh, Activation::sigmoid}) {
        auto p = scalar_cell(cand);
        auto set = [&](std::size_t b, double v) { p.params.mat(b)(0, 0) = v; };
        set(LstmParams::Wi, 1.0);
        set(LstmParams::Wc, 0.5);
        set(LstmParams::Wf, -0.3);
        set(LstmParams::Wo, 0.8);
        set(LstmParams::Ui, 0.2);
        set(LstmParams::Uc, -0.7);
        set(LstmParams::Uf, 0.4);
        set(LstmParams::Uo, 0.1);
        set(LstmParams::bi, 0.05);
        set(LstmParams::bc, -0.1);
        set(LstmParams::bf, 1.0);
        set(LstmParams::bo, 0.0);
        const double x1 = 1.0, x2 = -2.0;
        auto cand_act = [&](double z) { return cand == Activation::tanh ? std::tanh(z) : sig(z); };

        double h = 0, c = 0;
        double hs[2], cs[2];
        for (int t = 0; t < 2; ++t) {
            const double x = t == 0 ? x1 : x2;
            const double i = sig(1.0 * x + 0.2 * h + 0.05);
            const double g = cand_act(0.5 * x - 0.7 * h - 0.1);
            const double f = sig(-0.3 * x + 0.4 * h + 1.0);
            const double o = sig(0.8 * x + 0.1 * h + 0.0);
            c = i * g + f * c;
            h = o * std::tanh(c);
            hs[t] = h;
            cs[t] = c;
        }
        Eigen::VectorXd hv = Eigen::VectorXd::Zero(1), cv = Eigen::VectorXd::Zero(1);
        for (int t = 0; t < 2; ++t) {
            const auto s = lstm_cell_step(Eigen::VectorXd::Constant(1, t == 0 ? x1 : x2), hv, cv, p);
            EXPECT_NEAR(s.h[0], hs[t], 1e-12);
            EXPECT_NEAR(s.c[0], cs[t], 1e-12);
            hv = s.h;
            cv = s.c;
        }
    }
}

TEST(LstmForward, ZeroParamsGiveUniformSoftmax) {
    LstmParams p({3, 3, 3, Activation::tanh});
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(3, 4);
    const auto probs = softmax(lstm_forward(X, p));
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(probs[k], 1.0 / 3.0, 1e-15);
    EXPECT_EQ(argmax_polarity(probs), Polarity::positive);
}

TEST(LstmForward, SingleTokenIsOneStepPlusAffine) {
    Rng rng(3);
    LstmParams p({4, 5, 3, Activation::tanh});
    p.initialize(rng);
    testing::randomize(p.params, rng, 0.5);
    const Eigen::VectorXd x = Eigen::VectorXd::Random(4);
    const auto s = lstm_cell_step(x, Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(5), p);
    const Eigen::VectorXd expect = p.params.mat(LstmParams::Ws) * s.h + p.params.vec(LstmParams::bs);
    EXPECT_LT((lstm_forward(Eigen::MatrixXd(x), p) - expect).norm(), 1e-15);
}

TEST(LstmForward, TokenOrderMatters) {
    Rng rng(4);
    LstmParams p({3, 3, 3, Activation::tanh});
    testing::randomize(p.params, rng, 1.0);
    Eigen::MatrixXd X(3, 3);
    X << 1, 0, -1, 0.5, 2, 0, -1, 1, 0.25;
    Eigen::MatrixXd Y = X;
    Y.col(0).swap(Y.col(2));
    EXPECT_GT((lstm_forward(X, p) - lstm_forward(Y, p)).norm(), 1e-6);
}

TEST(LstmForward, EmptyInputThrows) {
    LstmParams p({3, 3, 3, Activation::tanh});
    EXPECT_THROW(lstm_forward(Eigen::MatrixXd(3, 0), p), ArgumentError);
}

TEST(LstmForward, PaddingColumnsAreIgnored) {
    Rng rng(5);
    LstmParams p({3, 4, 3, Activation::tanh});
    testing::randomize(p.params, rng, 1.0);
    Network net(p);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(3, 2);
    const auto a = net.logits({X, 2});
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(3, 7);
    padded.leftCols(2) = X;
    EXPECT_EQ(a, net.logits({padded, 2}));
}

TEST(LstmProperties, HiddenStateStaysInsideUnitBox) {
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        LstmParams p({5, 4, 3, trial % 2 ? Activation::sigmoid : Activation::tanh});
        testing::randomize(p.params, rng, 5.0);
        Eigen::MatrixXd X(5, 8);
        for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(-50, 50);
        const auto tr = lstm_run(X, 8, p);
        for (const auto& s : tr.steps) EXPECT_LT(s.h.cwiseAbs().maxCoeff(), 1.0);
    }
}

TEST(LstmGradients, MatchFiniteDifferencesBothCandidates) {
    for (auto cand : {Activation::tanh, Activation::sigmoid}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng rng(100 + seed);
            LstmParams p({4, 4, 3, cand});
            testing::randomize(p.params, rng, 0.8);
            const auto batch = testing::random_batch(rng, 4, 6, 3);
            for (const auto& t : testing::check_gradients(Network(p), batch, 0.5, seed)) {
                EXPECT_LE(t.relative_error, 1e-4) << to_string(cand) << " seed " << seed << " " << t.name;
            }
        }
    }
}

TEST(LstmGradients, InputGradientsMatchFiniteDifferences) {
    Rng rng(7);
    LstmParams p({3, 4, 3, Activation::tanh});
    testing::randomize(p.params, rng, 0.8);
    Network net(p);
    auto batch = testing::random_batch(rng, 3, 5, 1, 5);
    const auto lg = loss_and_gradients(net, batch, 0.0, 0, true);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < batch[0].input.X.size(); ++i) {
        double& x = batch[0].input.X.data()[i];
        const double orig = x;
        x = orig + h;
        const double up = loss_and_gradients(net, batch, 0.0, 0).loss;
        x = orig - h;
        const double down = loss_and_gradients(net, batch, 0.0, 0).loss;
        x = orig;
        EXPECT_NEAR(lg.input_grads[0].data()[i], (up - down) / (2 * h), 1e-7);
    }
}

TEST(Loss, UniformLogitsGiveLogThree) {
    LstmParams p({2, 2, 3, Activation::tanh});
    Rng rng(8);
    const auto batch = testing::random_batch(rng, 2, 3, 4);
    EXPECT_NEAR(loss_and_gradients(Network(p), batch, 0.0, 0).loss, std::log(3.0), 1e-15);
    EXPECT_NEAR(std::log(3.0), 1.098612, 1e-6);
}

TEST(Loss, DuplicatedBatchKeepsMeanLossAndGradients) {
    Rng rng(9);
    LstmParams p({3, 3, 3, Activation::tanh});
    testing::randomize(p.params, rng, 0.5);
    const Network net(p);
    const auto batch = testing::random_batch(rng, 3, 4, 5);
    auto doubled = batch;
    doubled.insert(doubled.end(), batch.begin(), batch.end());
    const auto a = loss_and_gradients(net, batch, 0.0, 0);
    const auto b = loss_and_gradients(net, doubled, 0.0, 0);
    EXPECT_NEAR(a.loss, b.loss, 1e-14);
    for (std::size_t i = 0; i < a.grads.size(); ++i) EXPECT_NEAR(a.grads.data()[i], b.grads.data()[i], 1e-14);
}

TEST(Softmax, SumsToOneAndStaysPositive) {
    Rng rng(10);
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXd z(3);
        for (int k = 0; k < 3; ++k) z[k] = rng.uniform(-300, 300);
        const auto p = softmax(z);
        EXPECT_NEAR(p.sum(), 1.0, 1e-9);
        EXPECT_GE(p.minCoeff(), 0.0);
    }
}

}  // namespace
}  // namespace xlsent::nn
