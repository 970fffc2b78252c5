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

#include "hbias/experiments/catalog.hpp"

#include <set>

#include "hbias/errors.hpp"

namespace hbias {

Profile Profile::named(std::string_view name) {
    Profile p;
    p.name = std::string(name);
    if (name == "paper") return p;
    if (name == "desk") {
        p.width = 128;
        p.sizes.train = 50000;
        return p;
    }
    if (name == "smoke") {
        p.width = 16;
        p.sizes = {300, 40, 40, 40};
        p.hyper.eval_interval = 10;
        p.hyper.min_batches = 20;
        p.hyper.max_batches = 40;
        return p;
    }
    throw ConfigError("unknown profile '" + std::string(name) + "' (expected desk, paper or smoke)");
}

nlohmann::json Profile::to_json() const {
    return {{"name", name},
            {"width", width},
            {"sizes", {{"train", sizes.train}, {"val", sizes.val}, {"test", sizes.test}, {"gen", sizes.gen}}},
            {"training", hyper.to_json()}};
}

Profile Profile::from_json(const nlohmann::json& j) {
    try {
        Profile p;
        p.name = j.at("name").get<std::string>();
        p.width = j.at("width").get<int>();
        const auto& s = j.at("sizes");
        p.sizes = {s.at("train").get<std::size_t>(), s.at("val").get<std::size_t>(), s.at("test").get<std::size_t>(),
                   s.at("gen").get<std::size_t>()};
        p.hyper = TrainingHyper::from_json(j.at("training"));
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad profile: ") + e.what());
    }
}

nlohmann::json GridPoint::to_json() const {
    return {{"name", name}, {"recipe", recipe}, {"model", model.to_json()}, {"training", hyper.to_json()}};
}

GridPoint GridPoint::from_json(const nlohmann::json& j) {
    try {
        GridPoint g;
        g.name = j.at("name").get<std::string>();
        g.recipe = j.at("recipe").get<std::string>();
        g.model = ModelConfig::from_json(j.at("model"));
        g.hyper = TrainingHyper::from_json(j.at("training"));
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad grid point: ") + e.what());
    }
}

void ExperimentSpec::validate() const {
    if (seeds.empty()) throw ConfigError("experiment '" + id + "' has no seeds");
    if (points.empty()) throw ConfigError("experiment '" + id + "' has no grid points");
    std::set<std::string> names;
    for (const auto& p : points) {
        if (p.name.empty() || p.name.find_first_of("/\\ ") != std::string::npos)
            throw ConfigError("grid point name '" + p.name + "' is not a plain directory name");
        if (!names.insert(p.name).second) throw ConfigError("duplicate grid point '" + p.name + "'");
        p.model.validate();
        p.hyper.validate();
        const Recipe r = Recipe::parse(p.recipe);
        if (r.brackets && p.model.encoder == Structure::Tree)
            throw ConfigError("grid point '" + p.name + "': bracketed input has no trees");
    }
}

nlohmann::json ExperimentSpec::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) pts.push_back(p.to_json());
    return {{"id", id}, {"profile", profile.to_json()}, {"data_seed", data_seed}, {"seeds", seeds}, {"points", pts}};
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
    try {
        ExperimentSpec s;
        s.id = j.at("id").get<std::string>();
        s.profile = Profile::from_json(j.at("profile"));
        s.data_seed = j.at("data_seed").get<std::uint64_t>();
        s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        for (const auto& p : j.at("points")) s.points.push_back(GridPoint::from_json(p));
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment spec: ") + e.what());
    }
}

const std::vector<std::string>& catalog_ids() {
    static const std::vector<std::string> ids = {"question-seq", "squashing",   "tree-models",        "onlstm",
                                                 "reinflection-models", "unambiguous", "structure-ablation", "multitask"};
    return ids;
}

namespace {

struct Builder {
    const Profile& profile;
    std::vector<GridPoint> points;

    ModelConfig model(CellKind cell, Attention att, Structure enc = Structure::Sequential,
                      Structure dec = Structure::Sequential) const {
        ModelConfig m;
        m.cell = cell;
        m.attention = att;
        m.encoder = enc;
        m.decoder = dec;
        m.embedding = m.hidden = profile.width;
        return m;
    }

    void add(std::string name, std::string recipe, ModelConfig m, int patience = 0) {
        GridPoint g{std::move(name), std::move(recipe), m, profile.hyper};
        if (patience) g.hyper.patience = patience;
        points.push_back(std::move(g));
    }

    std::string seq_name(CellKind c, Attention a) const {
        return std::string(to_string(c)) + "-" + std::string(to_string(a));
    }

    // The nine unit x attention sequential models.
    void sequential_grid(const std::string& recipe) {
        for (auto c : {CellKind::SRN, CellKind::GRU, CellKind::LSTM})
            for (auto a : {Attention::None, Attention::Location, Attention::Content})
                add(seq_name(c, a), recipe, model(c, a));
    }
};

constexpr int kBracketPatience = 6;

}  // namespace

ExperimentSpec make_experiment(std::string_view id, const Profile& profile, unsigned seed_count) {
    Builder b{profile, {}};
    const auto Seq = Structure::Sequential;
    const auto Tree = Structure::Tree;
    const auto None = Attention::None;
    if (id == "question-seq") {
        b.sequential_grid("question");
    } else if (id == "squashing") {
        for (auto c : {CellKind::GRU, CellKind::UnsquashedGRU, CellKind::LSTM, CellKind::SquashedLSTM})
            b.add(b.seq_name(c, Attention::Location), "question", b.model(c, Attention::Location));
    } else if (id == "tree-models") {
        b.add("Seq-Seq", "question", b.model(CellKind::GRU, None, Seq, Seq));
        b.add("Seq-Tree", "question", b.model(CellKind::GRU, None, Seq, Tree));
        b.add("Tree-Seq", "question", b.model(CellKind::GRU, None, Tree, Seq));
        b.add("Tree-Tree", "question", b.model(CellKind::GRU, None, Tree, Tree));
    } else if (id == "onlstm") {
        b.add("ON_LSTM-NONE", "question", b.model(CellKind::ONLSTM, None));
    } else if (id == "reinflection-models") {
        b.sequential_grid("reinflection");
        b.add("ON_LSTM-NONE", "reinflection", b.model(CellKind::ONLSTM, None));
        b.add("Tree-Tree", "reinflection", b.model(CellKind::GRU, None, Tree, Tree));
    } else if (id == "unambiguous") {
        for (auto r : {TransformRule::MoveMain, TransformRule::MoveFirst, TransformRule::AgreeSubject,
                       TransformRule::AgreeRecent}) {
            const std::string rule(to_string(r));
            b.add("GRU-NONE-" + rule, "unambiguous:" + rule, b.model(CellKind::GRU, None));
            b.add("Tree-Tree-" + rule, "unambiguous:" + rule, b.model(CellKind::GRU, None, Tree, Tree));
        }
    } else if (id == "structure-ablation") {
        for (const char* task : {"question", "reinflection"}) {
            b.add(std::string("GRU-NONE-brackets-") + task, std::string(task) + "+brackets",
                  b.model(CellKind::GRU, None), kBracketPatience);
            b.add(std::string("Tree-Tree-rightbranch-") + task, std::string(task) + "+rightbranch",
                  b.model(CellKind::GRU, None, Tree, Tree));
        }
    } else if (id == "multitask") {
        for (const char* amb : {"question", "reinflection"}) {
            b.add(std::string("multitask-") + amb, std::string("multitask:") + amb, b.model(CellKind::GRU, None));
            b.add(std::string("multitask-") + amb + "-aux", std::string("multitask:") + amb + "+aux",
                  b.model(CellKind::GRU, None));
        }
    } else {
        throw ConfigError("unknown experiment '" + std::string(id) + "'");
    }
    ExperimentSpec s;
    s.id = std::string(id);
    s.profile = profile;
    for (unsigned k = 1; k <= seed_count; ++k) s.seeds.push_back(k);
    s.points = std::move(b.points);
    s.validate();
    return s;
}

}  // namespace hbias
