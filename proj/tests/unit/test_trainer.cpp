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

#include <cmath>

#include "doctest.h"
#include "hbias/train/trainer.hpp"

using namespace hbias;

namespace {

const DatasetBundle& tiny_bundle() {
    static const DatasetBundle b = build_from_recipe(Recipe::parse("question"), SplitSizes{300, 40, 40, 40}, 5);
    return b;
}

ModelConfig tiny_model() {
    ModelConfig c;
    c.embedding = 12;
    c.hidden = 12;
    return c;
}

TrainingHyper quick_hyper(std::uint64_t seed) {
    TrainingHyper h;
    h.eval_interval = 10;
    h.min_batches = 30;
    h.max_batches = 60;
    h.seed = seed;
    return h;
}

}  // namespace

TEST_SUITE("trainer") {

TEST_CASE("patience trace from the default protocol") {
    EarlyStopping s(30000, 3);
    const double losses[] = {2.0, 1.5, 1.4, 1.41, 1.42, 1.43};
    long batch = 30000;
    for (int i = 0; i < 6; ++i, batch += 1000) {
        const bool stop = s.update(batch, losses[i]);
        CHECK(stop == (i == 5));
    }
    CHECK(s.best_loss() == 1.4);
    CHECK(s.best_batches() == 32000);
}

TEST_CASE("stopping boundaries") {
    SUBCASE("minimum batch count") {
        EarlyStopping s(30000, 3);
        s.update(100, 1.0);
        for (long b : {200L, 300L}) CHECK_FALSE(s.update(b, 1.0));
        CHECK_FALSE(s.update(29999, 1.0));  // three stale evaluations, too early
        CHECK(s.update(30000, 1.0));
    }
    SUBCASE("strict improvement") {
        EarlyStopping s(0, 1);
        CHECK_FALSE(s.update(1, 1.0));
        CHECK_FALSE(s.update(2, std::nextafter(1.0, 0.0)));  // smallest possible gain resets
        CHECK(s.improved());
        CHECK(s.update(3, std::nextafter(1.0, 0.0)));  // equal is not an improvement
        CHECK_FALSE(s.improved());
    }
    SUBCASE("improvement resets the stale count") {
        EarlyStopping s(0, 2);
        s.update(1, 3.0);
        CHECK_FALSE(s.update(2, 3.5));
        CHECK_FALSE(s.update(3, 2.0));
        CHECK_FALSE(s.update(4, 2.5));
        CHECK(s.update(5, 2.5));
    }
}

TEST_CASE("hyperparameter validation") {
    TrainingHyper h;
    CHECK(h.learning_rate == 1e-3);
    CHECK(h.batch_size == 5);
    CHECK(h.eval_interval == 1000);
    CHECK(h.min_batches == 30000);
    CHECK(h.patience == 3);
    CHECK(h.teacher_forcing == 0.5);
    CHECK(TrainingHyper::from_json(h.to_json()) == h);
    TrainingHyper bad = h;
    bad.patience = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = h;
    bad.teacher_forcing = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(TrainingHyper::from_json({{"momentum", 0.9}}), ConfigError);
}

TEST_CASE("validation loss sanity") {
    const auto& b = tiny_bundle();
    Seq2Seq m(tiny_model(), Vocab::standard(), 1);
    const double l = validation_loss(m, b.val);
    CHECK(l >= 0);
    const double uniform = std::log(double(m.vocab().size()));
    CHECK(std::abs(l - uniform) / uniform < 0.15);
    std::vector<Example> twice = b.val;
    twice.insert(twice.end(), b.val.begin(), b.val.end());
    CHECK(validation_loss(m, twice) == doctest::Approx(l).epsilon(1e-12));
    CHECK(validation_loss(m, b.val) == l);
    CHECK_THROWS_AS(validation_loss(m, {}), ContractViolation);
}

TEST_CASE("training is deterministic and lowers the validation loss") {
    const auto& b = tiny_bundle();
    auto run = [&](std::uint64_t seed) {
        Seq2Seq m(tiny_model(), Vocab::standard(), seed);
        TrainingLog log = train(m, b.train, b.val, quick_hyper(seed));
        return std::make_pair(log, validation_loss(m, b.val));
    };
    auto [log1, v1] = run(3);
    auto [log2, v2] = run(3);
    CHECK(v1 == v2);
    CHECK(log1.evaluations.size() == log2.evaluations.size());
    CHECK(log1.total_batches == 60);
    CHECK(log1.stop == StopReason::MaxBatches);
    CHECK(v1 == doctest::Approx(log1.best_val_loss).epsilon(1e-12));  // best parameters restored
    Seq2Seq fresh(tiny_model(), Vocab::standard(), 3);
    CHECK(v1 < validation_loss(fresh, b.val));
    auto [log3, v3] = run(4);
    CHECK(v3 != v1);
    for (std::size_t i = 1; i < log1.evaluations.size(); ++i)
        CHECK(log1.evaluations[i].batches > log1.evaluations[i - 1].batches);
}

TEST_CASE("patience stops a run") {
    const auto& b = tiny_bundle();
    Seq2Seq m(tiny_model(), Vocab::standard(), 2);
    TrainingHyper h = quick_hyper(2);
    h.learning_rate = 0.5;  // overshoots, so validation loss stops improving
    h.patience = 1;
    h.min_batches = 20;
    h.max_batches = 1000;
    std::vector<Evaluation> seen;
    TrainingLog log = train(m, b.train, b.val, h, [&](const Evaluation& e) { seen.push_back(e); });
    CHECK(seen.size() == log.evaluations.size());
    CHECK(log.stop == StopReason::PatienceExhausted);
    CHECK(log.total_batches < 1000);
    CHECK(log.total_batches >= 20);
    CHECK(log.best_batches < log.total_batches);
}

TEST_CASE("non-finite values abort with the log") {
    const auto& b = tiny_bundle();
    Seq2Seq m(tiny_model(), Vocab::standard(), 2);
    m.params().get("dec.out.W").value.setConstant(1e308);
    try {
        train(m, b.train, b.val, quick_hyper(1));
        FAIL("expected TrainingAborted");
    } catch (const TrainingAborted& e) {
        CHECK(e.log().stop == StopReason::NumericFailure);
        CHECK_FALSE(e.log().error.empty());
    }
}

TEST_CASE("training log JSON round trip") {
    TrainingLog log;
    log.evaluations = {{1000, 2.5}, {2000, 1.25}};
    log.stop = StopReason::MaxBatches;
    log.total_batches = 2000;
    log.best_batches = 2000;
    log.best_val_loss = 1.25;
    log.wall_seconds = 3.5;
    TrainingLog back = TrainingLog::from_json(log.to_json());
    CHECK(back.evaluations.size() == 2);
    CHECK(back.evaluations[1].val_loss == 1.25);
    CHECK(back.stop == StopReason::MaxBatches);
    CHECK(back.best_val_loss == 1.25);
    CHECK_THROWS_AS(TrainingLog::from_json({{"stop", "bored"}}), ParseError);
}

}  // TEST_SUITE
