// Copyright 2026 The hbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

// Central finite-difference gradient oracle shared by the unit and
// acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hbias/autodiff/tape.hpp"
#include "hbias/rng.hpp"

namespace hbias::testing {

struct GradCheckResult {
    double max_rel_error = 0.0;
    double max_abs_error = 0.0;
    std::size_t checked = 0;
    std::string worst;  // parameter[index] with the largest error
};

inline constexpr double kFdStep = 1e-5;
inline constexpr double kRelTolerance = 1e-4;
// Coordinates whose analytic and numeric values agree to this absolute
// level count as exact; relative error is meaningless near zero.
inline constexpr double kAbsFloor = 1e-9;

/// Compares analytic gradients with central differences on `samples`
/// coordinates drawn uniformly over all parameter entries (all entries when
/// samples == 0).
inline GradCheckResult grad_check(ParameterSet& params, const std::function<Var(Tape&)>& loss_fn,
                                  std::size_t samples, Rng& rng, double h = kFdStep) {
    params.zero_grad();
    {
        Tape tape;
        tape.backward(loss_fn(tape));
    }
    std::vector<std::pair<std::size_t, Eigen::Index>> coords;
    for (std::size_t p = 0; p < params.size(); ++p)
        for (Eigen::Index k = 0; k < params[p].value.size(); ++k) coords.emplace_back(p, k);
    if (samples > 0 && samples < coords.size()) {
        rng.shuffle(coords);
        coords.resize(samples);
    }
    auto eval = [&]() {
        Tape tape;
        return static_cast<double>(tape.value(loss_fn(tape))(0, 0));
    };
    GradCheckResult r;
    for (auto [p, k] : coords) {
        Real& w = params[p].value.data()[k];
        const Real saved = w;
        w = static_cast<Real>(saved + h);
        const double up = eval();
        w = static_cast<Real>(saved - h);
        const double down = eval();
        w = saved;
        const double numeric = (up - down) / (2 * h);
        const double analytic = params[p].grad.data()[k];
        const double diff = std::abs(numeric - analytic);
        r.max_abs_error = std::max(r.max_abs_error, diff);
        double rel = 0.0;
        if (diff > kAbsFloor) rel = diff / std::max(std::abs(numeric), std::abs(analytic));
        ++r.checked;
        if (rel > r.max_rel_error) {
            r.max_rel_error = rel;
            r.worst = params[p].name + "[" + std::to_string(k) + "] analytic " + std::to_string(analytic) +
                      " numeric " + std::to_string(numeric);
        }
    }
    params.zero_grad();
    return r;
}

}  // namespace hbias::testing
