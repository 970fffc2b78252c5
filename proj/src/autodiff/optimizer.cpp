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

#include "hbias/autodiff/optimizer.hpp"

#include <cmath>

#include "hbias/errors.hpp"

namespace hbias {

Real global_grad_norm(const ParameterSet& params) {
    Real sq = 0;
    for (std::size_t i = 0; i < params.size(); ++i) sq += params[i].grad.squaredNorm();
    return std::sqrt(sq);
}

void Adam::step(ParameterSet& params) {
    if (m_.empty()) {
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_.push_back(Mat::Zero(params[i].value.rows(), params[i].value.cols()));
            v_.push_back(Mat::Zero(params[i].value.rows(), params[i].value.cols()));
        }
    }
    if (m_.size() != params.size()) throw ContractViolation("optimizer bound to a different parameter set");
    Real scale = 1;
    if (cfg_.clip_norm > 0) {
        const Real norm = global_grad_norm(params);
        if (norm > cfg_.clip_norm) scale = cfg_.clip_norm / norm;
    }
    ++t_;
    const Real c1 = 1 - std::pow(cfg_.beta1, static_cast<Real>(t_));
    const Real c2 = 1 - std::pow(cfg_.beta2, static_cast<Real>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Parameter& p = params[i];
        auto g = p.grad.array() * scale;
        m_[i].array() = cfg_.beta1 * m_[i].array() + (1 - cfg_.beta1) * g;
        v_[i].array() = cfg_.beta2 * v_[i].array() + (1 - cfg_.beta2) * g.square();
        p.value.array() -= cfg_.lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + cfg_.eps);
        p.grad.setZero();
    }
}

}  // namespace hbias
