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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hbias/hbias.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitLibrary = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;  // sweep finished with failed runs

struct Failure {
    hbias_status status;
};

void check(hbias_status s) {
    if (s != HBIAS_OK) throw Failure{s};
}

// Owns a string returned by the C API.
struct CString {
    char* p = nullptr;
    ~CString() { hbias_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { Free(p); }
};
using Dataset = Handle<hbias_dataset, hbias_dataset_free>;
using Model = Handle<hbias_model, hbias_model_free>;

void log_line(const char* line, void*) { std::cerr << line << std::endl; }

std::string read_file(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
}

std::string pretty(const std::string& json) { return nlohmann::json::parse(json).dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inductive-bias experiments on synthetic syntactic transformations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hbias_version());
    unsigned workers = 0;
    app.add_option("--workers", workers, "Worker threads (default: $HBIAS_WORKERS or all cores)");

    std::string recipe, out_dir, config_file, data_dir, checkpoint, experiment, profile = "desk", format = "markdown",
                                                                                 output_file, input;
    std::uint64_t seed = 1;
    unsigned seeds = 10;
    std::optional<std::size_t> n_train, n_val, n_test, n_gen;

    auto* gen = app.add_subcommand("gen-data", "Build a dataset bundle from a recipe");
    gen->add_option("recipe", recipe,
                    "question | reinflection | unambiguous:<RULE> | multitask:<family>, flags +aux +brackets "
                    "+rightbranch")
        ->required();
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--seed", seed, "Generator seed");
    std::string gen_profile = "paper";
    gen->add_option("--profile", gen_profile, "Split sizes of a profile")->check(CLI::IsMember({"desk", "paper", "smoke"}));
    gen->add_option("--train", n_train, "Override training size");
    gen->add_option("--val", n_val, "Override validation size");
    gen->add_option("--test", n_test, "Override test size");
    gen->add_option("--gen", n_gen, "Override generalization size");

    auto* tr = app.add_subcommand("train", "Train one model on a dataset");
    tr->add_option("--config", config_file, "JSON file {\"model\": {...}, \"training\": {...}}")->required();
    tr->add_option("--data", data_dir, "Dataset directory")->required();
    tr->add_option("--seed", seed, "Initialization, order and teacher-forcing seed");
    out_dir = "run";
    tr->add_option("--out", out_dir, "Output directory (default ./run)");

    auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    ev->add_option("--checkpoint", checkpoint, "model.bin written by train or sweep")->required();
    ev->add_option("--data", data_dir, "Dataset directory")->required();
    std::string eval_out;
    ev->add_option("--out", eval_out, "Where to write metrics.json and gen_predictions.tsv (default: beside the checkpoint)");

    auto* pr = app.add_subcommand("predict", "Greedy decode of one input with a sequential model");
    pr->add_option("--checkpoint", checkpoint, "model.bin")->required();
    pr->add_option("input", input, "Tokens, task token last, e.g. \"my yak does read . quest\"")->required();

    auto* sw = app.add_subcommand("sweep", "Run or resume a catalog experiment over several seeds");
    sw->add_option("experiment", experiment, "Catalog id (see `catalog`)")->required();
    sw->add_option("--seeds", seeds, "Number of seeds (1..K)")->check(CLI::PositiveNumber);
    sw->add_option("--profile", profile, "desk | paper | smoke")->check(CLI::IsMember({"desk", "paper", "smoke"}));
    sw->add_option("--out", out_dir, "Sweep directory")->required();

    auto* rp = app.add_subcommand("report", "Summarize sweep results");
    rp->add_option("dir", data_dir, "Sweep directory or a directory of sweeps")->required();
    rp->add_option("--format", format, "csv | json | markdown")->check(CLI::IsMember({"csv", "json", "markdown"}));
    rp->add_option("--output", output_file, "Write to a file instead of stdout");

    auto* cat = app.add_subcommand("catalog", "List experiment ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            nlohmann::json sizes = nlohmann::json::object();
            if (gen_profile == "desk") sizes["train"] = 50000;
            if (gen_profile == "smoke") sizes = {{"train", 300}, {"val", 40}, {"test", 40}, {"gen", 40}};
            if (n_train) sizes["train"] = *n_train;
            if (n_val) sizes["val"] = *n_val;
            if (n_test) sizes["test"] = *n_test;
            if (n_gen) sizes["gen"] = *n_gen;
            Dataset d;
            check(hbias_dataset_generate(recipe.c_str(), seed, sizes.dump().c_str(), &d.p));
            check(hbias_dataset_save(d.p, out_dir.c_str()));
            CString info;
            check(hbias_dataset_info(d.p, &info.p));
            std::cout << pretty(info.str());
        } else if (*tr) {
            const auto cfg = nlohmann::json::parse(read_file(config_file));
            if (!cfg.is_object()) throw std::runtime_error(config_file + ": expected a JSON object");
            for (auto it = cfg.begin(); it != cfg.end(); ++it)
                if (it.key() != "model" && it.key() != "training")
                    throw std::runtime_error(config_file + ": unknown key '" + it.key() + "'");
            const std::string model_json = cfg.value("model", nlohmann::json::object()).dump();
            const std::string training_json = cfg.value("training", nlohmann::json::object()).dump();
            Dataset d;
            check(hbias_dataset_load(data_dir.c_str(), &d.p));
            Model m;
            check(hbias_model_create(model_json.c_str(), seed, &m.p));
            fs::create_directories(out_dir);
            CString log;
            const hbias_status s =
                hbias_model_train(m.p, d.p, training_json.c_str(), seed, log_line, nullptr, &log.p);
            if (log.p) write_file(fs::path(out_dir) / "training_log.json", pretty(log.str()));
            check(s);
            const fs::path ckpt = fs::path(out_dir) / "model.bin";
            check(hbias_model_save(m.p, ckpt.c_str()));
            std::cerr << "saved " << ckpt.string() << std::endl;
        } else if (*ev) {
            Dataset d;
            check(hbias_dataset_load(data_dir.c_str(), &d.p));
            Model m;
            check(hbias_model_load(checkpoint.c_str(), &m.p));
            const fs::path out = eval_out.empty() ? fs::path(checkpoint).parent_path() : fs::path(eval_out);
            if (!out.empty()) fs::create_directories(out);
            const fs::path preds = out / "gen_predictions.tsv";
            CString metrics;
            check(hbias_model_evaluate(m.p, d.p, workers, preds.c_str(), &metrics.p));
            write_file(out / "metrics.json", pretty(metrics.str()));
            std::cout << pretty(metrics.str());
        } else if (*pr) {
            Model m;
            check(hbias_model_load(checkpoint.c_str(), &m.p));
            CString outp;
            check(hbias_model_predict(m.p, input.c_str(), &outp.p));
            std::cout << outp.str() << '\n';
        } else if (*sw) {
            CString summary;
            check(hbias_sweep(experiment.c_str(), profile.c_str(), seeds, out_dir.c_str(), workers, log_line, nullptr,
                              &summary.p));
            std::cout << pretty(summary.str());
            if (!nlohmann::json::parse(summary.str()).at("failed").empty()) return kExitPartial;
        } else if (*rp) {
            CString text;
            check(hbias_report(data_dir.c_str(), format.c_str(), &text.p));
            if (output_file.empty())
                std::cout << text.str();
            else
                write_file(output_file, text.str());
        } else if (*cat) {
            CString ids;
            check(hbias_catalog(&ids.p));
            for (const auto& id : nlohmann::json::parse(ids.str())) std::cout << id.get<std::string>() << '\n';
        }
    } catch (const Failure& f) {
        std::cerr << "error (" << hbias_status_name(f.status) << "): " << hbias_last_error() << std::endl;
        return kExitLibrary;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitLibrary;
    }
    return 0;
}
