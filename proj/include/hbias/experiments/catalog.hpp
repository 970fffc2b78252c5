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
#include <string>
#include <string_view>
#include <vector>

#include "hbias/dataset/dataset.hpp"
#include "hbias/models/config.hpp"
#include "hbias/train/trainer.hpp"
#include "json.hpp"

namespace hbias {

/// Scale settings shared by every run of a sweep.
struct Profile {
    std::string name;
    int width = 256;  // embedding and hidden size
    SplitSizes sizes;
    TrainingHyper hyper;

    /// "paper" (full scale), "desk" (width 128, 50 000 training
    /// examples) or "smoke" (tiny, for tests). Throws ConfigError.
    static Profile named(std::string_view name);
    nlohmann::json to_json() const;
    static Profile from_json(const nlohmann::json& j);
    friend bool operator==(const Profile&, const Profile&) = default;
};

/// One model/dataset combination of an experiment.
struct GridPoint {
    std::string name;  // unique within the experiment, safe as a directory name
    std::string recipe;
    ModelConfig model;
    TrainingHyper hyper;  // seed is filled per run

    nlohmann::json to_json() const;
    static GridPoint from_json(const nlohmann::json& j);
    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct ExperimentSpec {
    std::string id;
    Profile profile;
    std::uint64_t data_seed = 1;  // datasets are shared by every run
    std::vector<std::uint64_t> seeds;
    std::vector<GridPoint> points;

    /// Throws ConfigError for an empty seed list, duplicate point names or
    /// an invalid model.
    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// question-seq, squashing, tree-models, onlstm, reinflection-models,
/// unambiguous, structure-ablation, multitask.
const std::vector<std::string>& catalog_ids();
/// Seeds 1..seed_count.
ExperimentSpec make_experiment(std::string_view id, const Profile& profile, unsigned seed_count);

}  // namespace hbias
