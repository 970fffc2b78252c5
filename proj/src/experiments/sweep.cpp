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

#include "hbias/experiments/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "hbias/errors.hpp"

namespace hbias {
namespace fs = std::filesystem;

namespace {

// Write-then-rename so a crash never leaves a half-written file behind.
void write_json(const fs::path& file, const nlohmann::json& j) {
    const fs::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write " + tmp.string());
        out << j.dump(2) << '\n';
    }
    fs::rename(tmp, file);
}

nlohmann::json read_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot read " + file.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
}

std::string hex(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << v;
    return s.str();
}

}  // namespace

unsigned default_workers() {
    if (const char* env = std::getenv(kWorkersEnv); env && *env) {
        unsigned n = 0;
        const char* end = env + std::char_traits<char>::length(env);
        auto [p, ec] = std::from_chars(env, end, n);
        if (ec != std::errc() || p != end || n == 0)
            throw ConfigError(std::string(kWorkersEnv) + " must be a positive integer, got '" + env + "'");
        return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

fs::path data_dir(const fs::path& out, const std::string& recipe) {
    std::string name = recipe;
    for (char& c : name)
        if (c == ':' || c == '+') c = '-';
    return out / "data" / name;
}

fs::path run_dir(const fs::path& out, const std::string& point, std::uint64_t seed) {
    return out / point / ("seed_" + std::to_string(seed));
}

DatasetBundle load_or_build(const fs::path& dir, const std::string& recipe, const SplitSizes& sizes,
                            std::uint64_t seed) {
    const Recipe r = Recipe::parse(recipe);
    if (fs::exists(dir / "provenance.json")) {
        DatasetBundle b = read_bundle(dir);
        const Provenance& p = b.provenance;
        if (p.recipe != r.to_string() || !(p.sizes == sizes) || p.seed != seed)
            throw ConfigError("dataset at " + dir.string() + " was built with different settings");
        return b;
    }
    DatasetBundle b = build_from_recipe(r, sizes, seed);
    const fs::path tmp = dir.string() + ".tmp";
    fs::remove_all(tmp);
    write_bundle(b, tmp);
    fs::create_directories(dir.parent_path());
    fs::rename(tmp, dir);
    return b;
}

RunOutcome run_one(const ExperimentSpec& spec, const GridPoint& point, std::uint64_t seed,
                   const DatasetBundle& bundle, const fs::path& dir) {
    RunOutcome out{point.name, seed, std::nullopt, {}, false};
    fs::create_directories(dir);
    if (fs::exists(dir / "metrics.json")) {
        out.metrics = MetricsReport::from_json(read_json(dir / "metrics.json"));
        out.skipped = true;
        return out;
    }
    fs::remove(dir / "error.json");
    try {
        Seq2Seq model(point.model, Vocab::standard(), seed);
        TrainingHyper hyper = point.hyper;
        hyper.seed = seed;
        TrainingLog log;
        try {
            log = train(model, bundle.train, bundle.val, hyper);
        } catch (const TrainingAborted& e) {
            write_json(dir / "training_log.json", e.log().to_json());
            throw;
        }
        write_json(dir / "training_log.json", log.to_json());
        model.save(dir / "model.bin", {{"experiment", spec.id}, {"config", point.name}, {"seed", seed}});
        EvalRun ev = evaluate(model_predictor(model), bundle, 1);
        write_gen_predictions(bundle, ev.gen, dir / "gen_predictions.tsv");
        write_json(dir / "provenance.json", {{"experiment", spec.id},
                                             {"config", point.name},
                                             {"seed", seed},
                                             {"profile", spec.profile.to_json()},
                                             {"recipe", point.recipe},
                                             {"data_seed", spec.data_seed},
                                             {"grammar_hash", hex(bundle.provenance.grammar_hash)},
                                             {"model", point.model.to_json()},
                                             {"training", hyper.to_json()},
                                             {"real", kRealName}});
        write_json(dir / "metrics.json", ev.metrics.to_json());
        out.metrics = ev.metrics;
    } catch (const std::exception& e) {
        out.error = e.what();
        write_json(dir / "error.json", {{"reason", out.error}});
    }
    return out;
}

std::vector<RunOutcome> run_sweep(const ExperimentSpec& spec, const fs::path& out, const SweepOptions& options) {
    spec.validate();
    fs::create_directories(out);
    const fs::path spec_file = out / "spec.json";
    if (fs::exists(spec_file)) {
        if (!(ExperimentSpec::from_json(read_json(spec_file)) == spec))
            throw ConfigError(out.string() + " holds a different sweep; use a fresh directory");
    } else {
        write_json(spec_file, spec.to_json());
    }
    auto log = [&](const std::string& line) {
        if (options.log) options.log(line);
    };

    std::map<std::string, DatasetBundle> data;
    for (const auto& p : spec.points) {
        if (data.count(p.recipe)) continue;
        log("dataset " + p.recipe);
        data.emplace(p.recipe, load_or_build(data_dir(out, p.recipe), p.recipe, spec.profile.sizes, spec.data_seed));
    }

    struct Job {
        const GridPoint* point;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& p : spec.points)
        for (auto s : spec.seeds) jobs.push_back({&p, s});

    std::vector<RunOutcome> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t finished = 0;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            const Job& j = jobs[i];
            RunOutcome r = run_one(spec, *j.point, j.seed, data.at(j.point->recipe), run_dir(out, j.point->name, j.seed));
            std::lock_guard lock(mu);
            ++finished;
            std::string status = r.skipped ? "done earlier" : r.error.empty() ? "done" : "FAILED: " + r.error;
            log("[" + std::to_string(finished) + "/" + std::to_string(jobs.size()) + "] " + j.point->name + " seed " +
                std::to_string(j.seed) + ": " + status);
            results[i] = std::move(r);
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace hbias
