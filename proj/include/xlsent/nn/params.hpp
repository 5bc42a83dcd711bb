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

#ifndef XLSENT_NN_PARAMS_HPP
#define XLSENT_NN_PARAMS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/error.hpp"
#include "xlsent/rng.hpp"

namespace xlsent::nn {

/// Named matrix blocks laid out back to back in one flat buffer (each block
/// column-major). Gradients and optimizer state share the same layout, so
/// element-wise code never needs to know the architecture.
class ParamSet {
public:
    struct Block {
        std::string name;
        Eigen::Index rows = 0;
        Eigen::Index cols = 0;
        std::size_t offset = 0;
        std::size_t size() const noexcept { return static_cast<std::size_t>(rows * cols); }
    };

    std::size_t add(std::string name, Eigen::Index rows, Eigen::Index cols) {
        blocks_.push_back({std::move(name), rows, cols, data_.size()});
        data_.resize(data_.size() + static_cast<std::size_t>(rows * cols), 0.0);
        return blocks_.size() - 1;
    }

    Eigen::Map<Eigen::MatrixXd> mat(std::size_t b) {
        const auto& k = blocks_[b];
        return {data_.data() + k.offset, k.rows, k.cols};
    }
    Eigen::Map<const Eigen::MatrixXd> mat(std::size_t b) const {
        const auto& k = blocks_[b];
        return {data_.data() + k.offset, k.rows, k.cols};
    }
    Eigen::Map<Eigen::VectorXd> vec(std::size_t b) {
        const auto& k = blocks_[b];
        return {data_.data() + k.offset, k.rows * k.cols};
    }
    Eigen::Map<const Eigen::VectorXd> vec(std::size_t b) const {
        const auto& k = blocks_[b];
        return {data_.data() + k.offset, k.rows * k.cols};
    }

    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }
    std::size_t size() const noexcept { return data_.size(); }

    ParamSet zeros_like() const {
        ParamSet z = *this;
        std::fill(z.data_.begin(), z.data_.end(), 0.0);
        return z;
    }

    bool same_layout(const ParamSet& o) const {
        if (blocks_.size() != o.blocks_.size()) return false;
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            const auto& a = blocks_[i];
            const auto& b = o.blocks_[i];
            if (a.name != b.name || a.rows != b.rows || a.cols != b.cols) return false;
        }
        return true;
    }

    void add_scaled(const ParamSet& o, double s) {
        if (!same_layout(o)) throw ArgumentError("parameter layouts differ");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    }

    bool all_finite() const {
        for (double x : data_) {
            if (!std::isfinite(x)) return false;
        }
        return true;
    }

    friend bool operator==(const ParamSet& a, const ParamSet& b) {
        return a.same_layout(b) && a.data_ == b.data_;
    }

private:
    std::vector<Block> blocks_;
    std::vector<double> data_;
};

/// Uniform in +-sqrt(6 / (rows + cols)).
inline void glorot_uniform(Eigen::Map<Eigen::MatrixXd> m, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
}

struct AdadeltaOptions {
    double rho = 0.95;
    double eps = 1e-6;
};

struct AdadeltaState {
    std::vector<double> accum_grad;
    std::vector<double> accum_update;

    AdadeltaState() = default;
    explicit AdadeltaState(std::size_t n) : accum_grad(n, 0.0), accum_update(n, 0.0) {}
};

inline void adadelta_step(std::span<double> params, std::span<const double> grads, AdadeltaState& state,
                          const AdadeltaOptions& opt = {}) {
    if (grads.size() != params.size() || state.accum_grad.size() != params.size() ||
        state.accum_update.size() != params.size()) {
        throw ArgumentError("adadelta: parameter, gradient and state sizes differ");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        double& eg = state.accum_grad[i];
        double& eu = state.accum_update[i];
        eg = opt.rho * eg + (1.0 - opt.rho) * g * g;
        const double delta = -std::sqrt(eu + opt.eps) / std::sqrt(eg + opt.eps) * g;
        eu = opt.rho * eu + (1.0 - opt.rho) * delta * delta;
        params[i] += delta;
    }
}

inline void adadelta_step(ParamSet& params, const ParamSet& grads, AdadeltaState& state,
                          const AdadeltaOptions& opt = {}) {
    if (!params.same_layout(grads)) throw ArgumentError("adadelta: parameter and gradient layouts differ");
    adadelta_step(std::span<double>(params.data()), std::span<const double>(grads.data()), state, opt);
}

}  // namespace xlsent::nn

#endif  // XLSENT_NN_PARAMS_HPP
