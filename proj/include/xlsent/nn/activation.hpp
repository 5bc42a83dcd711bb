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

#ifndef XLSENT_NN_ACTIVATION_HPP
#define XLSENT_NN_ACTIVATION_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace xlsent::nn {

enum class Activation { tanh, sigmoid, relu };

inline std::string to_string(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::sigmoid: return "sigmoid";
        case Activation::relu: return "relu";
    }
    return "?";
}

inline std::optional<Activation> parse_activation(std::string_view s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "relu") return Activation::relu;
    return std::nullopt;
}

inline double sigmoid(double x) {
    // Split by sign so exp never overflows.
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

template <typename Derived>
Eigen::ArrayXXd apply(Activation a, const Eigen::ArrayBase<Derived>& x) {
    switch (a) {
        case Activation::tanh: return x.tanh();
        case Activation::sigmoid: return x.unaryExpr([](double v) { return sigmoid(v); });
        case Activation::relu: return x.max(0.0);
    }
    return x;
}

/// Derivative expressed through the activation's output y = act(x).
/// relu'(0) is taken as 0.
template <typename Derived>
Eigen::ArrayXXd derivative_from_output(Activation a, const Eigen::ArrayBase<Derived>& y) {
    switch (a) {
        case Activation::tanh: return 1.0 - y.square();
        case Activation::sigmoid: return y * (1.0 - y);
        case Activation::relu: return (y > 0.0).template cast<double>();
    }
    return y;
}

inline double derivative_from_output(Activation a, double y) {
    switch (a) {
        case Activation::tanh: return 1.0 - y * y;
        case Activation::sigmoid: return y * (1.0 - y);
        case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

/// Numerically stable softmax.
inline Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    const double m = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - m).exp().matrix();
    return e / e.sum();
}

/// -log softmax(logits)[label], computed via log-sum-exp.
inline double cross_entropy(const Eigen::VectorXd& logits, Eigen::Index label) {
    const double m = logits.maxCoeff();
    return m + std::log((logits.array() - m).exp().sum()) - logits[label];
}

}  // namespace xlsent::nn

#endif  // XLSENT_NN_ACTIVATION_HPP
