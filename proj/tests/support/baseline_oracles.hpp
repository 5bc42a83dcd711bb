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

#ifndef XLSENT_TESTS_BASELINE_ORACLES_HPP
#define XLSENT_TESTS_BASELINE_ORACLES_HPP

// Independent oracles for the NB and SVM baselines, shared by the unit tests
// and the acceptance runner.

#include <algorithm>
#include <vector>

#include <Eigen/Dense>

#include "xlsent/baselines.hpp"

namespace xlsent::testing {

// Corpus: d1 pos {f0}, d2 pos {f0,f1}, d3 neg {f1}, d4 neu {f0}; alpha = 1.
struct NbToy {
    std::vector<SparseBinaryVector> docs{{{0}}, {{0, 1}}, {{1}}, {{0}}};
    std::vector<Polarity> labels{Polarity::positive, Polarity::positive, Polarity::negative, Polarity::neutral};
};

struct NbHandRow {
    SparseBinaryVector x;
    ClassScores posterior;
};

// Worked by hand from the counts above.
// P(f|pos) = (3/5, 2/5), P(f|neu) = (2/3, 1/3), P(f|neg) = (1/3, 2/3); priors 1/2, 1/4, 1/4.
inline std::vector<NbHandRow> nb_hand_table() {
    const double z1 = 1.0 / 5 + 1.0 / 12 + 1.0 / 6;
    return {
        {{{0, 1}}, {27.0 / 52, 25.0 / 104, 25.0 / 104}},
        {{{0}}, {6.0 / 11, 10.0 / 33, 5.0 / 33}},
        {{{1}}, {1.0 / 5 / z1, 1.0 / 12 / z1, 1.0 / 6 / z1}},
        {{}, {0.5, 0.25, 0.25}},
    };
}

// Six 2-D points that are not linearly separable.
struct SixPoints {
    std::vector<Eigen::Vector2d> x{{1, 2}, {2, 3}, {0.5, 2.5}, {2, 0.5}, {3, 1}, {1.2, 1.8}};
    std::vector<int> y{1, 1, 1, -1, -1, -1};

    std::vector<SparseRow> rows() const {
        std::vector<SparseRow> r;
        for (const auto& p : x) r.push_back({{0, 1}, {p[0], p[1]}});
        return r;
    }
};

inline double primal(const SixPoints& s, const Eigen::Vector3d& wt, double C) {
    double hinge = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        hinge += std::max(0.0, 1.0 - s.y[i] * (wt.head<2>().dot(s.x[i]) + wt[2]));
    }
    return 0.5 * wt.squaredNorm() + C * hinge;
}

// Brute force over the margin pattern of every point: each point is inside
// the margin (hinge linear), on it (equality), or beyond it (no term). For a
// fixed pattern the problem is an equality-constrained quadratic solved in
// closed form; the true optimum is among the candidates, so the best one by
// the exact primal objective is the minimizer.
inline Eigen::Vector3d brute_force_svm(const SixPoints& s, double C) {
    const std::size_t n = s.x.size();
    auto aug = [&](std::size_t i) { return Eigen::Vector3d(s.x[i][0], s.x[i][1], 1.0); };
    Eigen::Vector3d best = Eigen::Vector3d::Zero();
    double best_val = primal(s, best, C);
    std::size_t patterns = 1;
    for (std::size_t i = 0; i < n; ++i) patterns *= 3;
    for (std::size_t code = 0; code < patterns; ++code) {
        Eigen::Vector3d v = Eigen::Vector3d::Zero();
        std::vector<std::size_t> on;
        for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) {
            if (c % 3 == 1) v += C * s.y[i] * aug(i);
            if (c % 3 == 2) on.push_back(i);
        }
        Eigen::Vector3d w = v;
        if (!on.empty()) {
            Eigen::MatrixXd A(on.size(), 3);
            for (std::size_t r = 0; r < on.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = s.y[on[r]] * aug(on[r]);
            const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(A.rows()) - A * v;
            const Eigen::VectorXd mu = (A * A.transpose()).completeOrthogonalDecomposition().solve(rhs);
            w = v + A.transpose() * mu;
        }
        const double val = primal(s, w, C);
        if (val < best_val) best_val = val, best = w;
    }
    return best;
}

}  // namespace xlsent::testing

#endif  // XLSENT_TESTS_BASELINE_ORACLES_HPP
