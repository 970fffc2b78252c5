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

#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "hbias/dataset/dataset.hpp"
#include "hbias/models/seq2seq.hpp"
#include "json.hpp"

namespace hbias {

struct Prediction {
    Tokens tokens;
    bool truncated = false;
};

using Predictor = std::function<Prediction(const Example&)>;

/// Free-running greedy decodes of a trained model.
Predictor model_predictor(const Seq2Seq& model);
/// Rule oracle: re-parses the example's sentence and applies `rule` (the
/// identity task token keeps its identity rule). Brackets are ignored.
Predictor rule_predictor(TransformRule rule);
/// Echoes the gold output.
Predictor gold_predictor();

enum class FirstWordClass { MainAux, FirstAux, Other };
std::string_view to_string(FirstWordClass c);
FirstWordClass classify_first_word(const Tokens& decode, const EvalMeta& meta);

enum class VerbClass { Hierarchical, Linear, Other };
std::string_view to_string(VerbClass c);
/// Classifies the decoded token at the gold main-verb position; a decode
/// too short to reach it is Other.
VerbClass classify_main_verb(const Tokens& decode, const EvalMeta& meta);

struct MetricsReport {
    std::size_t test_count = 0;
    std::optional<double> test_full_acc;
    // Question generalization: first word against the target rule's
    // auxiliary, plus a rule-free classification.
    std::size_t first_word_count = 0;
    std::optional<double> gen_first_word_acc;
    std::optional<double> main_aux_prop, first_aux_prop, other_prop;
    // Reinflection generalization.
    std::size_t main_verb_count = 0;
    std::optional<double> gen_main_verb_acc;
    std::optional<double> main_verb_lemma_acc;
    double truncated_prop = 0;  // over all decodes

    nlohmann::json to_json() const;
    static MetricsReport from_json(const nlohmann::json& j);
    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Pure function of decodes and gold data. Decodes and gold outputs are
/// compared with brackets stripped; the target rule per family comes from
/// the bundle provenance (hierarchical rule when absent).
MetricsReport compute_metrics(const DatasetBundle& bundle, const std::vector<Prediction>& test,
                              const std::vector<Prediction>& gen);

struct EvalRun {
    std::vector<Prediction> test, gen;
    MetricsReport metrics;
};

/// Decodes test and generalization splits on `workers` threads.
EvalRun evaluate(const Predictor& predict, const DatasetBundle& bundle, unsigned workers = 1);

/// input, gold, decode, classification, correct (tab separated, header row).
void write_gen_predictions(const DatasetBundle& bundle, const std::vector<Prediction>& gen,
                           const std::filesystem::path& file);

}  // namespace hbias
