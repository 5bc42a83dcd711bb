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

#ifndef XLSENT_TESTS_GRADCHECK_HPP
#define XLSENT_TESTS_GRADCHECK_HPP

// Central finite differences against loss_and_gradients, shared by the unit
// tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "xlsent/nn/network.hpp"

namespace xlsent::testing {

struct TensorCheck {
    std::string name;
    double relative_error = 0.0;  // ||analytic - numeric|| / max(||analytic||, ||numeric||)
    double numeric_norm = 0.0;
};

/// Random batch of padded inputs in [-1, 1]. Every sample has `max_len`
/// columns with zero padding after its true length.
inline std::vector<nn::Sample> random_batch(Rng& rng, Eigen::Index dim, Eigen::Index max_len, std::size_t n,
                                            Eigen::Index min_length = 1) {
    std::vector<nn::Sample> batch;
    for (std::size_t i = 0; i < n; ++i) {
        const auto len = std::max(min_length, 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(max_len))));
        nn::Sample s{{Eigen::MatrixXd::Zero(dim, max_len), len}, polarity_from_code(static_cast<int>(rng.below(3)))};
        for (Eigen::Index t = 0; t < len; ++t)
            for (Eigen::Index k = 0; k < dim; ++k) s.input.X(k, t) = rng.uniform(-1.0, 1.0);
        batch.push_back(std::move(s));
    }
    return batch;
}

/// Fills every parameter (biases included) uniformly in [-scale, scale].
inline void randomize(nn::ParamSet& p, Rng& rng, double scale) {
    for (double& x : p.data()) x = rng.uniform(-scale, scale);
}

/// Per-block relative error between the analytic gradient and central
/// differences with step h.
inline std::vector<TensorCheck> check_gradients(nn::Network net, const std::vector<nn::Sample>& batch,
                                                double dropout, std::uint64_t dropout_seed, double h = 1e-5) {
    const auto analytic = nn::loss_and_gradients(net, batch, dropout, dropout_seed).grads;
    auto& data = net.params().data();
    std::vector<double> numeric(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double orig = data[i];
        data[i] = orig + h;
        const double up = nn::loss_and_gradients(net, batch, dropout, dropout_seed).loss;
        data[i] = orig - h;
        const double down = nn::loss_and_gradients(net, batch, dropout, dropout_seed).loss;
        data[i] = orig;
        numeric[i] = (up - down) / (2.0 * h);
    }
    std::vector<TensorCheck> out;
    for (const auto& blk : analytic.blocks()) {
        double diff = 0, na = 0, nn_ = 0;
        for (std::size_t i = blk.offset; i < blk.offset + blk.size(); ++i) {
            const double a = analytic.data()[i];
            diff += (a - numeric[i]) * (a - numeric[i]);
            na += a * a;
            nn_ += numeric[i] * numeric[i];
        }
        const double denom = std::max({std::sqrt(na), std::sqrt(nn_), 1e-12});
        out.push_back({blk.name, std::sqrt(diff) / denom, std::sqrt(nn_)});
    }
    return out;
}

}  // namespace xlsent::testing

#endif  // XLSENT_TESTS_GRADCHECK_HPP
