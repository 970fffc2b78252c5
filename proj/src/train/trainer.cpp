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

#include "hbias/train/trainer.hpp"

#include <chrono>

#include "hbias/autodiff/optimizer.hpp"

namespace hbias {

void TrainingHyper::validate() const {
    if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
    if (batch_size <= 0 || eval_interval <= 0 || min_batches < 0 || max_batches <= 0)
        throw ConfigError("batch counts must be positive");
    if (patience < 1) throw ConfigError("patience must be at least 1");
    if (min_batches > max_batches) throw ConfigError("min_batches exceeds max_batches");
    if (!(teacher_forcing >= 0 && teacher_forcing <= 1)) throw ConfigError("teacher_forcing must be in [0, 1]");
    if (clip_norm < 0) throw ConfigError("clip_norm must be non-negative");
}

nlohmann::json TrainingHyper::to_json() const {
    return {{"learning_rate", learning_rate}, {"batch_size", batch_size},   {"eval_interval", eval_interval},
            {"min_batches", min_batches},     {"patience", patience},       {"teacher_forcing", teacher_forcing},
            {"max_batches", max_batches},     {"clip_norm", clip_norm},     {"seed", seed}};
}

TrainingHyper TrainingHyper::from_json(const nlohmann::json& j) {
    TrainingHyper h;
    try {
        if (!j.is_object()) throw ConfigError("training config must be a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "learning_rate")
                h.learning_rate = it->get<double>();
            else if (k == "batch_size")
                h.batch_size = it->get<int>();
            else if (k == "eval_interval")
                h.eval_interval = it->get<int>();
            else if (k == "min_batches")
                h.min_batches = it->get<int>();
            else if (k == "patience")
                h.patience = it->get<int>();
            else if (k == "teacher_forcing")
                h.teacher_forcing = it->get<double>();
            else if (k == "max_batches")
                h.max_batches = it->get<int>();
            else if (k == "clip_norm")
                h.clip_norm = it->get<double>();
            else if (k == "seed")
                h.seed = it->get<std::uint64_t>();
            else
                throw ConfigError("unknown training config key '" + k + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad training config: ") + e.what());
    }
    h.validate();
    return h;
}

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::PatienceExhausted:
            return "patience-exhausted";
        case StopReason::MaxBatches:
            return "max-batches-cap";
        case StopReason::NumericFailure:
            return "numeric-failure";
    }
    return "?";
}

StopReason stop_reason_from_string(std::string_view s) {
    for (auto r : {StopReason::PatienceExhausted, StopReason::MaxBatches, StopReason::NumericFailure})
        if (to_string(r) == s) return r;
    throw ParseError("unknown stop reason '" + std::string(s) + "'");
}

bool EarlyStopping::update(long batches, double loss) {
    improved_ = best_batches_ < 0 || loss < best_;
    if (improved_) {
        best_ = loss;
        best_batches_ = batches;
        stale_ = 0;
    } else {
        ++stale_;
    }
    return batches >= min_batches_ && stale_ >= patience_;
}

nlohmann::json TrainingLog::to_json() const {
    nlohmann::json evals = nlohmann::json::array();
    for (const auto& e : evaluations) evals.push_back({{"batches", e.batches}, {"val_loss", e.val_loss}});
    nlohmann::json j = {{"evaluations", evals},        {"stop", to_string(stop)},
                        {"total_batches", total_batches}, {"best_batches", best_batches},
                        {"best_val_loss", best_val_loss}, {"wall_seconds", wall_seconds}};
    if (!error.empty()) j["error"] = error;
    return j;
}

TrainingLog TrainingLog::from_json(const nlohmann::json& j) {
    TrainingLog log;
    try {
        for (const auto& e : j.at("evaluations"))
            log.evaluations.push_back({e.at("batches").get<long>(), e.at("val_loss").get<double>()});
        log.stop = stop_reason_from_string(j.at("stop").get<std::string>());
        log.total_batches = j.at("total_batches").get<long>();
        log.best_batches = j.at("best_batches").get<long>();
        log.best_val_loss = j.at("best_val_loss").get<double>();
        log.wall_seconds = j.at("wall_seconds").get<double>();
        if (j.contains("error")) log.error = j["error"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad training log: ") + e.what());
    }
    return log;
}

double validation_loss(const Seq2Seq& model, const std::vector<Example>& examples) {
    if (examples.empty()) throw ContractViolation("validation set is empty");
    double total = 0;
    std::size_t tokens = 0;
    Tape t;
    for (const Example& e : examples) {
        t.clear();
        Seq2Seq::Loss l = model.loss(t, e, Seq2Seq::Feed::Gold);
        total += static_cast<double>(t.value(l.total)(0, 0));
        tokens += l.tokens;
    }
    return total / static_cast<double>(tokens);
}

TrainingLog train(Seq2Seq& model, const std::vector<Example>& train, const std::vector<Example>& val,
                  const TrainingHyper& hyper, const ProgressFn& progress) {
    hyper.validate();
    if (train.empty()) throw ContractViolation("training set is empty");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    Rng order_rng(hyper.seed);
    Rng coin = order_rng.fork(1);  // teacher-forcing flips
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    order_rng.shuffle(order);
    std::size_t cursor = 0;

    AdamConfig ac;
    ac.lr = static_cast<Real>(hyper.learning_rate);
    ac.clip_norm = static_cast<Real>(hyper.clip_norm);
    Adam adam(ac);
    ParameterSet& params = model.params();
    params.zero_grad();

    std::vector<Mat> best(params.size());
    auto snapshot = [&] {
        for (std::size_t i = 0; i < params.size(); ++i) best[i] = params[i].value;
    };
    auto restore = [&] {
        for (std::size_t i = 0; i < params.size(); ++i)
            if (best[i].size()) params[i].value = best[i];
    };

    TrainingLog log;
    EarlyStopping stopper(hyper.min_batches, hyper.patience);
    Tape t;
    try {
        for (long batch = 1;; ++batch) {
            for (int k = 0; k < hyper.batch_size; ++k) {
                if (cursor == order.size()) {
                    order_rng.shuffle(order);
                    cursor = 0;
                }
                const Example& e = train[order[cursor++]];
                const auto feed = coin.bernoulli(hyper.teacher_forcing) ? Seq2Seq::Feed::Gold : Seq2Seq::Feed::Own;
                t.clear();
                Seq2Seq::Loss l = model.loss(t, e, feed);
                t.backward(l.total, Real(1) / static_cast<Real>(l.tokens));
            }
            adam.step(params);
            log.total_batches = batch;

            if (batch % hyper.eval_interval == 0) {
                const double vl = validation_loss(model, val);
                log.evaluations.push_back({batch, vl});
                const bool stop = stopper.update(batch, vl);
                if (stopper.improved()) snapshot();
                if (progress) progress(log.evaluations.back());
                if (stop) {
                    log.stop = StopReason::PatienceExhausted;
                    break;
                }
            }
            if (batch >= hyper.max_batches) {
                log.stop = StopReason::MaxBatches;
                break;
            }
        }
    } catch (const NumericHealthError& err) {
        restore();
        log.stop = StopReason::NumericFailure;
        log.error = err.what();
        log.best_batches = stopper.best_batches();
        log.best_val_loss = stopper.best_loss();
        log.wall_seconds = elapsed();
        throw TrainingAborted(err.what(), std::move(log));
    }
    restore();
    log.best_batches = stopper.best_batches();
    log.best_val_loss = stopper.best_loss();
    log.wall_seconds = elapsed();
    return log;
}

}  // namespace hbias
