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

#pragma once

#include <cstdint>
#include <vector>

#include "hbias/autodiff/tape.hpp"

namespace hbias {

struct AdamConfig {
    Real lr = Real(1e-3);
    Real beta1 = Real(0.9);
    Real beta2 = Real(0.999);
    Real eps = Real(1e-8);
    Real clip_norm = 0;  // 0 disables global-norm clipping
};

/// Adam with bias correction. `step` consumes and zeroes the gradients.
class Adam {
public:
    explicit Adam(AdamConfig config = {}) : cfg_(config) {}

    void step(ParameterSet& params);
    std::int64_t steps() const noexcept { return t_; }
    const AdamConfig& config() const noexcept { return cfg_; }

private:
    AdamConfig cfg_;
    std::int64_t t_ = 0;
    std::vector<Mat> m_, v_;
};

Real global_grad_norm(const ParameterSet& params);

}  // namespace hbias
