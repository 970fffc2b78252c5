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

#include "hbias/eval/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "hbias/errors.hpp"

namespace hbias {
namespace {

TransformRule target_rule(const Provenance& p, Family f) {
    auto it = p.target_rules.find(f);
    if (it != p.target_rules.end()) return it->second;
    return f == Family::Question ? TransformRule::MoveMain : TransformRule::AgreeSubject;
}

// Target token at the scored position under `rule`.
bool matches_target(const Tokens& decode, const Example& e, TransformRule rule) {
    switch (rule) {
        case TransformRule::MoveMain:
            return !decode.empty() && decode.front() == e.meta.main_aux;
        case TransformRule::MoveFirst:
            return !decode.empty() && decode.front() == e.meta.first_aux;
        case TransformRule::AgreeSubject:
            return classify_main_verb(decode, e.meta) == VerbClass::Hierarchical;
        case TransformRule::AgreeRecent:
            return classify_main_verb(decode, e.meta) == VerbClass::Linear;
        default:
            throw ContractViolation("generalization examples need a transforming target rule");
    }
}

double ratio(std::size_t num, std::size_t den) { return static_cast<double>(num) / static_cast<double>(den); }

std::optional<double> opt_ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return ratio(num, den);
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<double> opt_from(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

std::vector<Prediction> run_split(const Predictor& predict, const std::vector<Example>& xs, unsigned workers) {
    std::vector<Prediction> out(xs.size());
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(xs.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = predict(xs[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < xs.size();) out[i] = predict(xs[i]);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = xs.size();
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace

Predictor model_predictor(const Seq2Seq& model) {
    return [&model](const Example& e) {
        DecodeResult r = model.predict(e);
        return Prediction{std::move(r.tokens), r.truncated};
    };
}

Predictor rule_predictor(TransformRule rule) {
    struct Grammars {
        Grammar question = default_grammar(GrammarKind::Question);
        Grammar reinflection = default_grammar(GrammarKind::Reinflection);
        Grammar reinflection_aux = default_grammar(GrammarKind::ReinflectionAux);
    };
    auto g = std::make_shared<const Grammars>();
    return [g, rule](const Example& e) {
        Tokens sentence = strip_brackets(e.input);
        const Token task = sentence.back();
        sentence.pop_back();
        ParsedSentence s;
        if (e.family == Family::Question) {
            s = reparse_sentence(sentence, g->question, e.family, task);
        } else {
            const Grammar& gr = g->reinflection.derivable(sentence) ? g->reinflection : g->reinflection_aux;
            s = reparse_sentence(sentence, gr, e.family, task);
        }
        TransformRule r = rule;
        if (task == identity_task(e.family)) r = e.family == Family::Question ? TransformRule::IdentityDecl
                                                                              : TransformRule::IdentityPast;
        return Prediction{apply_transform(s, r), false};
    };
}

Predictor gold_predictor() {
    return [](const Example& e) { return Prediction{e.output, false}; };
}

std::string_view to_string(FirstWordClass c) {
    switch (c) {
        case FirstWordClass::MainAux:
            return "main-aux";
        case FirstWordClass::FirstAux:
            return "first-aux";
        case FirstWordClass::Other:
            return "other";
    }
    return "?";
}

FirstWordClass classify_first_word(const Tokens& decode, const EvalMeta& meta) {
    if (decode.empty()) return FirstWordClass::Other;
    if (decode.front() == meta.main_aux) return FirstWordClass::MainAux;
    if (decode.front() == meta.first_aux) return FirstWordClass::FirstAux;
    return FirstWordClass::Other;
}

std::string_view to_string(VerbClass c) {
    switch (c) {
        case VerbClass::Hierarchical:
            return "verb-subject";
        case VerbClass::Linear:
            return "verb-recent";
        case VerbClass::Other:
            return "other";
    }
    return "?";
}

VerbClass classify_main_verb(const Tokens& decode, const EvalMeta& meta) {
    if (!meta.verb_index) throw ContractViolation("example has no main-verb position");
    if (*meta.verb_index >= decode.size()) return VerbClass::Other;
    const Token& v = decode[*meta.verb_index];
    if (v == meta.verb_hier) return VerbClass::Hierarchical;
    if (v == meta.verb_linear) return VerbClass::Linear;
    return VerbClass::Other;
}

MetricsReport compute_metrics(const DatasetBundle& bundle, const std::vector<Prediction>& test,
                              const std::vector<Prediction>& gen) {
    if (test.size() != bundle.test.size() || gen.size() != bundle.gen.size())
        throw ContractViolation("prediction counts do not match the bundle");
    MetricsReport r;
    std::size_t exact = 0, truncated = 0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        exact += strip_brackets(test[i].tokens) == strip_brackets(bundle.test[i].output);
        truncated += test[i].truncated;
    }
    r.test_count = test.size();
    r.test_full_acc = opt_ratio(exact, test.size());

    std::size_t fw_ok = 0, main = 0, first = 0, other = 0, mv_ok = 0, lemma = 0;
    for (std::size_t i = 0; i < gen.size(); ++i) {
        const Example& e = bundle.gen[i];
        const Tokens decode = strip_brackets(gen[i].tokens);
        truncated += gen[i].truncated;
        const bool ok = matches_target(decode, e, target_rule(bundle.provenance, e.family));
        if (e.family == Family::Question) {
            ++r.first_word_count;
            fw_ok += ok;
            switch (classify_first_word(decode, e.meta)) {
                case FirstWordClass::MainAux:
                    ++main;
                    break;
                case FirstWordClass::FirstAux:
                    ++first;
                    break;
                case FirstWordClass::Other:
                    ++other;
                    break;
            }
        } else {
            ++r.main_verb_count;
            mv_ok += ok;
            if (*e.meta.verb_index < decode.size()) {
                const Token& v = decode[*e.meta.verb_index];
                lemma += v == e.meta.verb_sg || v == e.meta.verb_pl;
            }
        }
    }
    r.gen_first_word_acc = opt_ratio(fw_ok, r.first_word_count);
    r.main_aux_prop = opt_ratio(main, r.first_word_count);
    r.first_aux_prop = opt_ratio(first, r.first_word_count);
    r.other_prop = opt_ratio(other, r.first_word_count);
    r.gen_main_verb_acc = opt_ratio(mv_ok, r.main_verb_count);
    r.main_verb_lemma_acc = opt_ratio(lemma, r.main_verb_count);
    const std::size_t all = test.size() + gen.size();
    r.truncated_prop = all ? ratio(truncated, all) : 0.0;
    return r;
}

nlohmann::json MetricsReport::to_json() const {
    return {{"test_count", test_count},
            {"test_full_acc", opt_json(test_full_acc)},
            {"first_word_count", first_word_count},
            {"gen_first_word_acc", opt_json(gen_first_word_acc)},
            {"main_aux_prop", opt_json(main_aux_prop)},
            {"first_aux_prop", opt_json(first_aux_prop)},
            {"other_prop", opt_json(other_prop)},
            {"main_verb_count", main_verb_count},
            {"gen_main_verb_acc", opt_json(gen_main_verb_acc)},
            {"main_verb_lemma_acc", opt_json(main_verb_lemma_acc)},
            {"truncated_prop", truncated_prop}};
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
    MetricsReport r;
    try {
        r.test_count = j.at("test_count").get<std::size_t>();
        r.test_full_acc = opt_from(j, "test_full_acc");
        r.first_word_count = j.at("first_word_count").get<std::size_t>();
        r.gen_first_word_acc = opt_from(j, "gen_first_word_acc");
        r.main_aux_prop = opt_from(j, "main_aux_prop");
        r.first_aux_prop = opt_from(j, "first_aux_prop");
        r.other_prop = opt_from(j, "other_prop");
        r.main_verb_count = j.at("main_verb_count").get<std::size_t>();
        r.gen_main_verb_acc = opt_from(j, "gen_main_verb_acc");
        r.main_verb_lemma_acc = opt_from(j, "main_verb_lemma_acc");
        r.truncated_prop = j.at("truncated_prop").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad metrics: ") + e.what());
    }
    return r;
}

EvalRun evaluate(const Predictor& predict, const DatasetBundle& bundle, unsigned workers) {
    EvalRun run;
    run.test = run_split(predict, bundle.test, workers);
    run.gen = run_split(predict, bundle.gen, workers);
    run.metrics = compute_metrics(bundle, run.test, run.gen);
    return run;
}

void write_gen_predictions(const DatasetBundle& bundle, const std::vector<Prediction>& gen,
                           const std::filesystem::path& file) {
    if (gen.size() != bundle.gen.size()) throw ContractViolation("prediction count does not match the bundle");
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << "input\tgold\tdecode\tclassification\tcorrect\n";
    for (std::size_t i = 0; i < gen.size(); ++i) {
        const Example& e = bundle.gen[i];
        const Tokens decode = strip_brackets(gen[i].tokens);
        const std::string_view cls = e.family == Family::Question ? to_string(classify_first_word(decode, e.meta))
                                                                  : to_string(classify_main_verb(decode, e.meta));
        const bool ok = matches_target(decode, e, target_rule(bundle.provenance, e.family));
        out << join_tokens(e.input) << '\t' << join_tokens(e.output) << '\t' << join_tokens(gen[i].tokens) << '\t'
            << cls << '\t' << (ok ? 1 : 0) << '\n';
    }
}

}  // namespace hbias
