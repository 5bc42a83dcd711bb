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
#include "xlsent/nn/cnn.hpp"
#include "xlsent/nn/network.hpp"

namespace xlsent::nn {
namespace {

// Tokens as rows, the way one writes them by hand; the library stores columns.
PaddedTweetMatrix from_rows(const Eigen::MatrixXd& rows, Eigen::Index length) {
    return {rows.transpose(), length};
}

CnnParams single_filter(Activation act) {
    CnnParams p({2, {2}, 1, 3, act});
    // w = [[0.5, -1], [2, 0.25]] over (x_i ; x_{i+1}), b = 0.1
    p.params.mat(p.filter_block(0)) << 0.5, -1.0, 2.0, 0.25;
    p.params.vec(p.bias_block(0))[0] = 0.1;
    return p;
}

TEST(CnnForward, ThreeByTwoSingleFilterHandOracle) {
    Eigen::MatrixXd rows(3, 2);
    rows << 1, 2, 0, -1, 3, 1;
    const auto in = from_rows(rows, 3);
    // window 1: 0.5*1 - 1*2 + 2*0 + 0.25*(-1) + 0.1 = -1.65
    // window 2: 0.5*0 - 1*(-1) + 2*3 + 0.25*1 + 0.1 = 7.35
    {
        const auto tr = cnn_features(in, single_filter(Activation::tanh));
        ASSERT_EQ(tr.maps[0].cols(), 2);
        EXPECT_NEAR(tr.maps[0](0, 0), std::tanh(-1.65), 1e-12);
        EXPECT_NEAR(tr.maps[0](0, 1), std::tanh(7.35), 1e-12);
        EXPECT_NEAR(tr.pooled[0], std::tanh(7.35), 1e-12);
        EXPECT_EQ(tr.argmax[0], 1);
    }
    {
        const auto tr = cnn_features(in, single_filter(Activation::relu));
        EXPECT_EQ(tr.maps[0](0, 0), 0.0);
        EXPECT_NEAR(tr.pooled[0], 7.35, 1e-12);
    }
}

TEST(CnnForward, SoftmaxLayerReadsPooledFeatures) {
    auto p = single_filter(Activation::relu);
    p.params.mat(p.softmax_weight()) << 1.0, -2.0, 0.5;
    p.params.vec(p.softmax_bias()) << 0.1, 0.2, 0.3;
    Eigen::MatrixXd rows(3, 2);
    rows << 1, 2, 0, -1, 3, 1;
    const auto logits = cnn_forward(from_rows(rows, 3), p);
    EXPECT_NEAR(logits[0], 7.35 + 0.1, 1e-12);
    EXPECT_NEAR(logits[1], -14.7 + 0.2, 1e-12);
    EXPECT_NEAR(logits[2], 3.675 + 0.3, 1e-12);
}

TEST(CnnForward, ZeroInputZeroBiasGivesSoftmaxBiasOnly) {
    Rng rng(1);
    CnnParams p({4, {3, 4, 5}, 100, 3, Activation::tanh});
    p.initialize(rng);
    p.params.vec(p.softmax_bias()) << 0.3, -0.2, 0.7;
    const PaddedTweetMatrix in{Eigen::MatrixXd::Zero(4, 9), 3};
    const auto tr = cnn_features(in, p);
    EXPECT_EQ(tr.pooled, Eigen::VectorXd::Zero(300));
    EXPECT_EQ(cnn_forward(in, p), Eigen::Vector3d(0.3, -0.2, 0.7));
}

TEST(CnnForward, DefaultShapeHasThreeHundredFilters) {
    CnnParams p(CnnShape{});
    EXPECT_EQ(p.shape.total_filters(), 300);
    EXPECT_EQ(p.params.mat(p.softmax_weight()).cols(), 300);
}

TEST(CnnForward, AllOnesMaskIsNoDropout) {
    Rng rng(2);
    CnnParams p({4, {3, 4, 5}, 2, 3, Activation::tanh});
    testing::randomize(p.params, rng, 1.0);
    const auto batch = testing::random_batch(rng, 4, 7, 1);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(6);
    EXPECT_EQ(cnn_forward(batch[0].input, p, &ones), cnn_forward(batch[0].input, p));
}

TEST(CnnForward, ShortMaxLenIsConfigError) {
    CnnParams p({2, {3, 4, 5}, 1, 3, Activation::tanh});
    EXPECT_THROW(cnn_features({Eigen::MatrixXd::Zero(2, 4), 4}, p), ConfigError);
    EXPECT_NO_THROW(cnn_features({Eigen::MatrixXd::Zero(2, 5), 4}, p));
}

TEST(CnnForward, TiesPickFirstWindow) {
    CnnParams p({2, {2}, 1, 3, Activation::tanh});
    p.params.vec(p.bias_block(0))[0] = 0.4;
    const auto tr = cnn_features({Eigen::MatrixXd::Zero(2, 6), 1}, p);
    EXPECT_EQ(tr.argmax[0], 0);
}

TEST(CnnPadding, ExtraPaddingIsNeutralWithoutBias) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        CnnParams p({3, {3, 4, 5}, 4, 3, Activation::relu});
        testing::randomize(p.params, rng, 1.0);
        for (std::size_t w = 0; w < 3; ++w) p.params.vec(p.bias_block(w)).setZero();
        const auto batch = testing::random_batch(rng, 3, 6, 1);
        // Reference already holds every window that touches a real token.
        const Eigen::MatrixXd tokens = batch[0].input.X.leftCols(batch[0].input.length);
        const auto a = cnn_features(pad_tweet(tokens, tokens.cols() + 4), p);
        const auto b = cnn_features(pad_tweet(tokens, 15), p);
        EXPECT_EQ(a.pooled, b.pooled);
    }
}

TEST(CnnPadding, BiasLeaksThroughPaddedWindows) {
    CnnParams p({1, {3}, 1, 3, Activation::tanh});
    p.params.mat(p.filter_block(0)).setConstant(-1.0);
    p.params.vec(p.bias_block(0))[0] = 0.5;
    const Eigen::MatrixXd tokens = Eigen::MatrixXd::Constant(1, 3, 1.0);
    const auto exact = cnn_features(pad_tweet(tokens, 3), p);
    const auto padded = cnn_features(pad_tweet(tokens, 6), p);
    EXPECT_NEAR(exact.pooled[0], std::tanh(-2.5), 1e-15);
    EXPECT_NEAR(padded.pooled[0], std::tanh(0.5), 1e-15);
}

TEST(CnnGradients, MatchFiniteDifferencesForEveryActivation) {
    for (auto act : {Activation::tanh, Activation::sigmoid, Activation::relu}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng rng(200 + seed);
            CnnParams p({4, {3, 4, 5}, 2, 3, act});
            testing::randomize(p.params, rng, 0.8);
            const auto batch = testing::random_batch(rng, 4, 6, 3);
            for (const auto& t : testing::check_gradients(Network(p), batch, 0.5, seed)) {
                EXPECT_LE(t.relative_error, 1e-4) << to_string(act) << " seed " << seed << " " << t.name;
            }
        }
    }
}

TEST(CnnGradients, InputGradientsMatchFiniteDifferences) {
    Rng rng(4);
    CnnParams p({3, {2, 3}, 3, 3, Activation::tanh});
    testing::randomize(p.params, rng, 0.8);
    Network net(p);
    auto batch = testing::random_batch(rng, 3, 6, 1, 6);
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

TEST(Dropout, MaskIsInvertedAndSeeded) {
    const auto m = dropout_mask(10000, 0.5, 9);
    EXPECT_EQ(m, dropout_mask(10000, 0.5, 9));
    EXPECT_NE(m, dropout_mask(10000, 0.5, 10));
    int zeros = 0;
    for (double v : m) {
        EXPECT_TRUE(v == 0.0 || v == 2.0);
        zeros += v == 0.0;
    }
    EXPECT_NEAR(zeros / 10000.0, 0.5, 0.03);
    EXPECT_EQ(dropout_mask(5, 0.0, 1), Eigen::VectorXd::Ones(5));
}

TEST(Adadelta, ZeroGradientIsFixedPoint) {
    std::vector<double> p{1.5, -2.0};
    AdadeltaState s(2);
    s.accum_grad = {0.0, 0.0};
    adadelta_step(p, std::vector<double>{0.0, 0.0}, s);
    EXPECT_EQ(p, (std::vector<double>{1.5, -2.0}));
    EXPECT_EQ(s.accum_grad, (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(s.accum_update, (std::vector<double>{0.0, 0.0}));
}

TEST(Adadelta, ScalarFirstStepHandValue) {
    std::vector<double> p{0.0};
    AdadeltaState s(1);
    adadelta_step(p, std::vector<double>{1.0}, s, {0.95, 1e-6});
    const double delta = -std::sqrt(1e-6) / std::sqrt(0.05 + 1e-6);
    EXPECT_NEAR(p[0], delta, 1e-12);
    EXPECT_NEAR(p[0], -0.0044721, 1e-7);
    EXPECT_NEAR(s.accum_grad[0], 0.05, 1e-12);
    EXPECT_NEAR(s.accum_update[0], 0.05 * delta * delta, 1e-12);
}

TEST(Adadelta, SignSymmetric) {
    std::vector<double> a{0.0}, b{0.0};
    AdadeltaState sa(1), sb(1);
    for (int i = 0; i < 5; ++i) {
        adadelta_step(a, std::vector<double>{0.3 * (i + 1)}, sa);
        adadelta_step(b, std::vector<double>{-0.3 * (i + 1)}, sb);
    }
    EXPECT_EQ(a[0], -b[0]);
    EXPECT_EQ(sa.accum_grad, sb.accum_grad);
    EXPECT_EQ(sa.accum_update, sb.accum_update);
}

TEST(Adadelta, ShapeMismatchThrows) {
    std::vector<double> p{0.0, 1.0};
    AdadeltaState s(2);
    EXPECT_THROW(adadelta_step(p, std::vector<double>{1.0}, s), ArgumentError);
}

}  // namespace
}  // namespace xlsent::nn
