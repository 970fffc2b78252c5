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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hbias/dataset/dataset.hpp"
#include "hbias/errors.hpp"
#include "hbias/models/seq2seq.hpp"
#include "json.hpp"

namespace hbias {

struct TrainingHyper {
    double learning_rate = 1e-3;
    int batch_size = 5;
    int eval_interval = 1000;  // batches between validations
    int min_batches = 30000;
    int patience = 3;
    double teacher_forcing = 0.5;
    int max_batches = 300000;  // safety cap
    double clip_norm = 0;      // 0 disables
    std::uint64_t seed = 0;

    /// Throws ConfigError unless every count is positive, patience >= 1,
    /// min_batches <= max_batches and teacher_forcing is a probability.
    void validate() const;
    nlohmann::json to_json() const;
    static TrainingHyper from_json(const nlohmann::json& j);

    friend bool operator==(const TrainingHyper&, const TrainingHyper&) = default;
};

enum class StopReason { PatienceExhausted, MaxBatches, NumericFailure };
std::string_view to_string(StopReason r);
StopReason stop_reason_from_string(std::string_view s);

/// Patience rule: an evaluation improves iff its loss is strictly below the
/// best so far; training stops once at least `min_batches` batches are done
/// and the last `patience` evaluations did not improve.
class EarlyStopping {
public:
    EarlyStopping(int min_batches, int patience) : min_batches_(min_batches), patience_(patience) {}

    /// Records an evaluation; returns true when training should stop.
    bool update(long batches, double loss);
    bool improved() const noexcept { return improved_; }
    double best_loss() const noexcept { return best_; }
    long best_batches() const noexcept { return best_batches_; }
    int stale() const noexcept { return stale_; }

private:
    int min_batches_, patience_;
    double best_ = 0;
    long best_batches_ = -1;
    int stale_ = 0;
    bool improved_ = false;
};

struct Evaluation {
    long batches = 0;
    double val_loss = 0;
};

struct TrainingLog {
    std::vector<Evaluation> evaluations;
    StopReason stop = StopReason::PatienceExhausted;
    long total_batches = 0;
    long best_batches = 0;
    double best_val_loss = 0;
    double wall_seconds = 0;
    std::string error;  // set for NumericFailure

    nlohmann::json to_json() const;
    static TrainingLog from_json(const nlohmann::json& j);
};

/// Raised when a forward value goes non-finite mid-run; carries the log up
/// to that point.
class TrainingAborted : public NumericHealthError {
public:
    TrainingAborted(const std::string& what, TrainingLog log) : NumericHealthError(what), log_(std::move(log)) {}
    const TrainingLog& log() const noexcept { return log_; }

private:
    TrainingLog log_;
};

/// Teacher-forced cross-entropy per output token over `examples`.
double validation_loss(const Seq2Seq& model, const std::vector<Example>& examples);

using ProgressFn = std::function<void(const Evaluation&)>;

/// Trains in place and leaves the model at its best validation loss.
/// Batches walk a seeded permutation of `train`, reshuffled each epoch;
/// each example is teacher-forced with probability `teacher_forcing`.
/// Per-example loss is the mean token cross-entropy; gradients are summed
/// over the batch.
TrainingLog train(Seq2Seq& model, const std::vector<Example>& train, const std::vector<Example>& val,
                  const TrainingHyper& hyper, const ProgressFn& progress = {});

}  // namespace hbias
