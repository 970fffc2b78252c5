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

#include <cstdlib>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "hbias/errors.hpp"
#include "hbias/experiments/catalog.hpp"
#include "hbias/experiments/report.hpp"
#include "hbias/experiments/sweep.hpp"

using namespace hbias;
namespace fs = std::filesystem;

namespace {

std::set<std::string> names(const ExperimentSpec& s) {
    std::set<std::string> out;
    for (const auto& p : s.points) out.insert(p.name);
    return out;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
    ~TempDir() { fs::remove_all(path); }
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("profiles") {
    Profile desk = Profile::named("desk");
    CHECK(desk.width == 128);
    CHECK(desk.sizes.train == 50000);
    CHECK(desk.hyper == TrainingHyper{});
    Profile paper = Profile::named("paper");
    CHECK(paper.width == 256);
    CHECK(paper.sizes == SplitSizes{});
    CHECK(Profile::from_json(desk.to_json()) == desk);
    CHECK_THROWS_AS(Profile::named("laptop"), ConfigError);
}

TEST_CASE("every catalog id round-trips through JSON") {
    for (const auto& id : catalog_ids()) {
        ExperimentSpec s = make_experiment(id, Profile::named("desk"), 10);
        CHECK(s.seeds.size() == 10);
        CHECK(ExperimentSpec::from_json(s.to_json()) == s);
        for (const auto& p : s.points) {
            CHECK(p.model.hidden == 128);
            CHECK_NOTHROW(Recipe::parse(p.recipe));
        }
    }
    CHECK_THROWS_AS(make_experiment("nonexistent", Profile::named("desk"), 1), ConfigError);
    CHECK_THROWS_AS(make_experiment("question-seq", Profile::named("desk"), 0), ConfigError);
}

TEST_CASE("grids cover the reported model and task combinations") {
    const Profile p = Profile::named("desk");
    auto seqgrid = make_experiment("question-seq", p, 1);
    CHECK(seqgrid.points.size() == 9);
    std::set<std::pair<CellKind, Attention>> combos;
    for (const auto& g : seqgrid.points) combos.insert({g.model.cell, g.model.attention});
    CHECK(combos.size() == 9);

    auto squash = make_experiment("squashing", p, 1);
    CHECK(names(squash) ==
          std::set<std::string>{"GRU-LOCATION", "UNSQUASHED_GRU-LOCATION", "LSTM-LOCATION", "SQUASHED_LSTM-LOCATION"});
    for (const auto& g : squash.points) CHECK(g.model.attention == Attention::Location);

    auto trees = make_experiment("tree-models", p, 1);
    std::set<std::pair<Structure, Structure>> structs;
    for (const auto& g : trees.points) structs.insert({g.model.encoder, g.model.decoder});
    CHECK(structs.size() == 4);

    CHECK(make_experiment("onlstm", p, 1).points.at(0).model.cell == CellKind::ONLSTM);

    auto reinf = make_experiment("reinflection-models", p, 1);
    CHECK(reinf.points.size() == 11);
    for (const auto& g : reinf.points) CHECK(g.recipe == "reinflection");

    auto unamb = make_experiment("unambiguous", p, 1);
    CHECK(unamb.points.size() == 8);
    std::set<std::string> recipes;
    for (const auto& g : unamb.points) recipes.insert(g.recipe);
    CHECK(recipes.size() == 4);

    auto ablation = make_experiment("structure-ablation", p, 1);
    CHECK(ablation.points.size() == 4);
    for (const auto& g : ablation.points) {
        const bool bracketed = Recipe::parse(g.recipe).brackets;
        CHECK(g.hyper.patience == (bracketed ? 6 : 3));
        if (!bracketed) CHECK(g.model.encoder == Structure::Tree);
    }

    auto multi = make_experiment("multitask", p, 1);
    CHECK(names(multi) == std::set<std::string>{"multitask-question", "multitask-question-aux",
                                               "multitask-reinflection", "multitask-reinflection-aux"});
}

TEST_CASE("spec validation") {
    ExperimentSpec s = make_experiment("tree-models", Profile::named("smoke"), 1);
    s.points.push_back(s.points.front());
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = make_experiment("tree-models", Profile::named("smoke"), 1);
    s.points[0].name = "a/b";
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = make_experiment("structure-ablation", Profile::named("smoke"), 1);
    s.points[0].model.encoder = Structure::Tree;  // bracketed data has no trees
    s.points[0].model.decoder = Structure::Tree;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("median") {
    CHECK(median({0.1, 0.9, 0.3}) == 0.3);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK(median({7}) == 7);
    CHECK_THROWS_AS(median({}), ContractViolation);
}

TEST_CASE("worker count from the environment") {
    ::setenv(kWorkersEnv, "3", 1);
    CHECK(default_workers() == 3);
    ::setenv(kWorkersEnv, "zero", 1);
    CHECK_THROWS_AS(default_workers(), ConfigError);
    ::setenv(kWorkersEnv, "0", 1);
    CHECK_THROWS_AS(default_workers(), ConfigError);
    ::unsetenv(kWorkersEnv);
    CHECK(default_workers() >= 1);
}

TEST_CASE("smoke sweep: outputs, reports and resumption") {
    TempDir tmp("hbias_sweep_test");
    const ExperimentSpec spec = make_experiment("tree-models", Profile::named("smoke"), 2);
    std::vector<std::string> lines;
    SweepOptions opt;
    opt.workers = 2;
    opt.log = [&](const std::string& l) { lines.push_back(l); };
    auto first = run_sweep(spec, tmp.path, opt);
    REQUIRE(first.size() == 8);
    for (const auto& r : first) {
        INFO(r.config, " ", r.error);
        CHECK(r.error.empty());
        CHECK_FALSE(r.skipped);
    }
    const fs::path rd = run_dir(tmp.path, "Tree-Tree", 2);
    for (const char* f : {"model.bin", "model.bin.json", "training_log.json", "metrics.json", "gen_predictions.tsv",
                          "provenance.json"})
        CHECK(fs::exists(rd / f));
    CHECK(fs::exists(data_dir(tmp.path, "question") / "provenance.json"));

    ReportTable t1 = load_results(tmp.path);
    CHECK(t1.rows.size() == 8);
    CHECK(t1.failures.empty());

    const std::string csv = render_report({t1}, ReportFormat::Csv);
    CHECK(csv.rfind("experiment,config,seed,test_full_acc,gen_first_word_acc,gen_main_verb_acc,first_aux_prop,"
                    "other_prop\n",
                    0) == 0);
    CHECK(count_lines(csv) == 1 + 8 + 4);

    const std::string md = render_report({t1}, ReportFormat::Markdown);
    CHECK(md.find("| Model | Runs | Test full-sentence | Gen first-word |") != std::string::npos);
    for (const char* row : {"| Seq-Seq |", "| Seq-Tree |", "| Tree-Seq |", "| Tree-Tree |"})
        CHECK(md.find(row) != std::string::npos);

    const auto j = nlohmann::json::parse(render_report({t1}, ReportFormat::Json));
    CHECK(ReportTable::from_json(j.at("tables").at(0)) == t1);

    auto second = run_sweep(spec, tmp.path, opt);
    for (const auto& r : second) CHECK(r.skipped);
    ReportTable t2 = load_results(tmp.path);
    CHECK(t2 == t1);
    CHECK(render_report({t2}, ReportFormat::Csv) == csv);
    CHECK(load_result_tree(tmp.path.parent_path() / tmp.path.filename()).size() == 1);

    ExperimentSpec other = spec;
    other.seeds.push_back(9);
    CHECK_THROWS_AS(run_sweep(other, tmp.path, opt), ConfigError);
}

TEST_CASE("a failing run is recorded and the sweep continues") {
    TempDir tmp("hbias_sweep_fail_test");
    ExperimentSpec spec = make_experiment("question-seq", Profile::named("smoke"), 1);
    spec.points.resize(2);
    spec.points[0].model.attention = Attention::Location;
    spec.points[0].model.max_positions = 2;  // every input is longer
    auto out = run_sweep(spec, tmp.path, {});
    REQUIRE(out.size() == 2);
    CHECK_FALSE(out[0].error.empty());
    CHECK(out[1].error.empty());
    ReportTable t = load_results(tmp.path);
    CHECK(t.rows.size() == 1);
    REQUIRE(t.failures.size() == 1);
    CHECK(t.failures[0].config == spec.points[0].name);
    CHECK(render_report({t}, ReportFormat::Markdown).find("Incomplete runs") != std::string::npos);
    auto agg = t.aggregate(spec.points[0].name);
    REQUIRE(agg);
    CHECK(agg->runs == 0);
    CHECK(agg->median.empty());
}

}  // TEST_SUITE
