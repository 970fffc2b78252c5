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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hbias/eval/evaluator.hpp"
#include "hbias/experiments/catalog.hpp"

namespace hbias {

/// Environment variable holding the worker count for sweeps.
inline constexpr const char* kWorkersEnv = "HBIAS_WORKERS";

/// HBIAS_WORKERS when set to a positive integer, else the hardware
/// concurrency (at least 1). Throws ConfigError for a malformed value.
unsigned default_workers();

struct RunOutcome {
    std::string config;
    std::uint64_t seed = 0;
    std::optional<MetricsReport> metrics;
    std::string error;     // non-empty on failure
    bool skipped = false;  // finished by an earlier invocation
};

struct SweepOptions {
    unsigned workers = 1;
    std::function<void(const std::string&)> log;  // progress lines; may be empty
};

/// <out>/data/<recipe>/ for a dataset recipe.
std::filesystem::path data_dir(const std::filesystem::path& out, const std::string& recipe);
/// <out>/<point>/seed_<k>/
std::filesystem::path run_dir(const std::filesystem::path& out, const std::string& point, std::uint64_t seed);

/// Loads the bundle under `dir` or builds and writes it.
DatasetBundle load_or_build(const std::filesystem::path& dir, const std::string& recipe, const SplitSizes& sizes,
                            std::uint64_t seed);

/// Trains and evaluates one run into `dir`: model.bin (+ manifest),
/// training_log.json, gen_predictions.tsv, provenance.json and, last,
/// metrics.json. Failures leave error.json instead of metrics.json.
RunOutcome run_one(const ExperimentSpec& spec, const GridPoint& point, std::uint64_t seed,
                   const DatasetBundle& bundle, const std::filesystem::path& dir);

/// Runs every (point, seed) not yet holding metrics.json. Writes spec.json
/// at the top. A failing run is recorded and the sweep continues.
std::vector<RunOutcome> run_sweep(const ExperimentSpec& spec, const std::filesystem::path& out,
                                  const SweepOptions& options = {});

}  // namespace hbias
