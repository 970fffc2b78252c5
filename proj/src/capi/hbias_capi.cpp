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

#include "hbias/hbias.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "hbias/errors.hpp"
#include "hbias/eval/evaluator.hpp"
#include "hbias/experiments/catalog.hpp"
#include "hbias/experiments/report.hpp"
#include "hbias/experiments/sweep.hpp"
#include "hbias/train/trainer.hpp"

struct hbias_dataset {
    hbias::DatasetBundle bundle;
};

struct hbias_model {
    std::unique_ptr<hbias::Seq2Seq> model;
};

namespace {

using namespace hbias;

thread_local std::string g_last_error;

hbias_status fail(hbias_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

// Maps library exceptions onto status codes; never lets one escape.
template <class F>
hbias_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const ContractViolation& e) {
        return fail(HBIAS_ERR_CONTRACT, e.what());
    } catch (const NumericHealthError& e) {
        return fail(HBIAS_ERR_NUMERIC, e.what());
    } catch (const ParseError& e) {
        return fail(HBIAS_ERR_PARSE, e.what());
    } catch (const CapacityError& e) {
        return fail(HBIAS_ERR_CAPACITY, e.what());
    } catch (const ConfigError& e) {
        return fail(HBIAS_ERR_CONFIG, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(HBIAS_ERR_PARSE, e.what());
    } catch (const std::exception& e) {
        return fail(HBIAS_ERR_IO, e.what());
    } catch (...) {
        return fail(HBIAS_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json parse_json(const char* text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad ") + what + " JSON: " + e.what());
    }
}

std::optional<Split> split_from_string(std::string_view s) {
    for (Split x : kAllSplits)
        if (to_string(x) == s) return x;
    return std::nullopt;
}

#define HBIAS_REQUIRE(cond, what) \
    if (!(cond)) return fail(HBIAS_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* hbias_version(void) { return "0.1.0"; }

const char* hbias_status_name(hbias_status s) {
    switch (s) {
        case HBIAS_OK:
            return "ok";
        case HBIAS_ERR_INVALID_ARGUMENT:
            return "invalid-argument";
        case HBIAS_ERR_CONTRACT:
            return "contract-violation";
        case HBIAS_ERR_NUMERIC:
            return "numeric-health";
        case HBIAS_ERR_PARSE:
            return "parse-error";
        case HBIAS_ERR_CAPACITY:
            return "capacity";
        case HBIAS_ERR_CONFIG:
            return "config-error";
        case HBIAS_ERR_IO:
            return "io-error";
        case HBIAS_ERR_INTERNAL:
            return "internal";
    }
    return "unknown";
}

const char* hbias_last_error(void) { return g_last_error.c_str(); }

void hbias_string_free(char* s) { std::free(s); }

hbias_status hbias_dataset_generate(const char* recipe, uint64_t seed, const char* sizes_json, hbias_dataset** out) {
    HBIAS_REQUIRE(recipe && out, "recipe and out must not be null");
    return guarded([&] {
        SplitSizes sizes;
        if (sizes_json) {
            const auto j = parse_json(sizes_json, "sizes");
            if (!j.is_object()) throw ConfigError("sizes must be a JSON object");
            for (auto it = j.begin(); it != j.end(); ++it) {
                const std::size_t n = it->get<std::size_t>();
                if (it.key() == "train")
                    sizes.train = n;
                else if (it.key() == "val")
                    sizes.val = n;
                else if (it.key() == "test")
                    sizes.test = n;
                else if (it.key() == "gen")
                    sizes.gen = n;
                else
                    throw ConfigError("unknown split size key '" + it.key() + "'");
            }
        }
        auto d = std::make_unique<hbias_dataset>();
        d->bundle = build_from_recipe(Recipe::parse(recipe), sizes, seed);
        *out = d.release();
        return HBIAS_OK;
    });
}

hbias_status hbias_dataset_load(const char* dir, hbias_dataset** out) {
    HBIAS_REQUIRE(dir && out, "dir and out must not be null");
    return guarded([&] {
        auto d = std::make_unique<hbias_dataset>();
        d->bundle = read_bundle(dir);
        *out = d.release();
        return HBIAS_OK;
    });
}

hbias_status hbias_dataset_save(const hbias_dataset* data, const char* dir) {
    HBIAS_REQUIRE(data && dir, "data and dir must not be null");
    return guarded([&] {
        write_bundle(data->bundle, dir);
        return HBIAS_OK;
    });
}

hbias_status hbias_dataset_size(const hbias_dataset* data, const char* split, size_t* out) {
    HBIAS_REQUIRE(data && split && out, "arguments must not be null");
    const auto which = split_from_string(split);
    if (!which) return fail(HBIAS_ERR_INVALID_ARGUMENT, "unknown split '" + std::string(split) + "'");
    return guarded([&] {
        *out = data->bundle.split(*which).size();
        return HBIAS_OK;
    });
}

hbias_status hbias_dataset_info(const hbias_dataset* data, char** json_out) {
    HBIAS_REQUIRE(data && json_out, "arguments must not be null");
    return guarded([&] {
        const Provenance& p = data->bundle.provenance;
        nlohmann::json sizes;
        for (Split s : kAllSplits) sizes[std::string(to_string(s))] = data->bundle.split(s).size();
        *json_out = dup(nlohmann::json{{"recipe", p.recipe},
                                       {"seed", p.seed},
                                       {"filters", p.filters},
                                       {"bracketed", p.bracketed},
                                       {"right_branching", p.right_branching},
                                       {"sizes", sizes}}
                            .dump());
        return HBIAS_OK;
    });
}

void hbias_dataset_free(hbias_dataset* data) { delete data; }

hbias_status hbias_model_create(const char* config_json, uint64_t seed, hbias_model** out) {
    HBIAS_REQUIRE(config_json && out, "config_json and out must not be null");
    return guarded([&] {
        auto m = std::make_unique<hbias_model>();
        m->model = std::make_unique<Seq2Seq>(ModelConfig::from_json(parse_json(config_json, "model config")),
                                             Vocab::standard(), seed);
        *out = m.release();
        return HBIAS_OK;
    });
}

hbias_status hbias_model_load(const char* checkpoint, hbias_model** out) {
    HBIAS_REQUIRE(checkpoint && out, "checkpoint and out must not be null");
    return guarded([&] {
        auto m = std::make_unique<hbias_model>();
        m->model = Seq2Seq::load(checkpoint);
        *out = m.release();
        return HBIAS_OK;
    });
}

hbias_status hbias_model_save(const hbias_model* model, const char* checkpoint) {
    HBIAS_REQUIRE(model && checkpoint, "model and checkpoint must not be null");
    return guarded([&] {
        model->model->save(checkpoint);
        return HBIAS_OK;
    });
}

hbias_status hbias_model_config(const hbias_model* model, char** json_out) {
    HBIAS_REQUIRE(model && json_out, "arguments must not be null");
    return guarded([&] {
        *json_out = dup(model->model->config().to_json().dump());
        return HBIAS_OK;
    });
}

hbias_status hbias_model_train(hbias_model* model, const hbias_dataset* data, const char* training_json,
                               uint64_t seed, hbias_log_fn log, void* user, char** log_json_out) {
    HBIAS_REQUIRE(model && data, "model and data must not be null");
    return guarded([&] {
        nlohmann::json hj = training_json ? parse_json(training_json, "training config") : nlohmann::json::object();
        hj["seed"] = seed;
        const TrainingHyper hyper = TrainingHyper::from_json(hj);
        ProgressFn progress;
        if (log)
            progress = [&](const Evaluation& e) {
                const std::string line = "batch " + std::to_string(e.batches) + " val_loss " + std::to_string(e.val_loss);
                log(line.c_str(), user);
            };
        try {
            TrainingLog tl = train(*model->model, data->bundle.train, data->bundle.val, hyper, progress);
            if (log_json_out) *log_json_out = dup(tl.to_json().dump());
        } catch (const TrainingAborted& e) {
            if (log_json_out) *log_json_out = dup(e.log().to_json().dump());
            throw;
        }
        return HBIAS_OK;
    });
}

hbias_status hbias_model_evaluate(const hbias_model* model, const hbias_dataset* data, unsigned workers,
                                  const char* predictions_path, char** metrics_json_out) {
    HBIAS_REQUIRE(model && data && metrics_json_out, "arguments must not be null");
    return guarded([&] {
        const unsigned n = workers ? workers : default_workers();
        EvalRun run = evaluate(model_predictor(*model->model), data->bundle, n);
        if (predictions_path) write_gen_predictions(data->bundle, run.gen, predictions_path);
        *metrics_json_out = dup(run.metrics.to_json().dump());
        return HBIAS_OK;
    });
}

hbias_status hbias_model_predict(const hbias_model* model, const char* input, char** output) {
    HBIAS_REQUIRE(model && input && output, "arguments must not be null");
    return guarded([&] {
        if (model->model->config().needs_input_tree() || model->model->config().needs_output_tree())
            throw ContractViolation("tree models need parse trees; evaluate them on a dataset");
        Example e;
        e.input = split_tokens(input);
        if (e.input.empty()) throw ContractViolation("empty input");
        *output = dup(join_tokens(model->model->predict(e).tokens));
        return HBIAS_OK;
    });
}

void hbias_model_free(hbias_model* model) { delete model; }

hbias_status hbias_catalog(char** json_out) {
    HBIAS_REQUIRE(json_out, "json_out must not be null");
    return guarded([&] {
        *json_out = dup(nlohmann::json(catalog_ids()).dump());
        return HBIAS_OK;
    });
}

hbias_status hbias_default_workers(unsigned* out) {
    HBIAS_REQUIRE(out, "out must not be null");
    return guarded([&] {
        *out = default_workers();
        return HBIAS_OK;
    });
}

hbias_status hbias_sweep(const char* experiment, const char* profile, unsigned seeds, const char* out_dir,
                         unsigned workers, hbias_log_fn log, void* user, char** summary_json_out) {
    HBIAS_REQUIRE(experiment && profile && out_dir, "experiment, profile and out_dir must not be null");
    return guarded([&] {
        const ExperimentSpec spec = make_experiment(experiment, Profile::named(profile), seeds);
        SweepOptions opt;
        opt.workers = workers ? workers : default_workers();
        if (log) opt.log = [&](const std::string& line) { log(line.c_str(), user); };
        const auto outcomes = run_sweep(spec, out_dir, opt);
        nlohmann::json failed = nlohmann::json::array();
        std::size_t done = 0, skipped = 0;
        for (const auto& o : outcomes) {
            if (!o.error.empty())
                failed.push_back({{"config", o.config}, {"seed", o.seed}, {"reason", o.error}});
            else
                ++done;
            skipped += o.skipped;
        }
        if (summary_json_out)
            *summary_json_out = dup(nlohmann::json{{"experiment", spec.id},
                                                   {"runs", outcomes.size()},
                                                   {"completed", done},
                                                   {"resumed", skipped},
                                                   {"failed", failed}}
                                        .dump());
        return HBIAS_OK;
    });
}

hbias_status hbias_report(const char* dir, const char* format, char** text_out) {
    HBIAS_REQUIRE(dir && format && text_out, "arguments must not be null");
    return guarded([&] {
        const ReportFormat f = report_format_from_string(format);
        *text_out = dup(render_report(load_result_tree(dir), f));
        return HBIAS_OK;
    });
}

}  // extern "C"
