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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hbias/dataset/dataset.hpp"
#include "hbias/errors.hpp"
#include "json.hpp"

namespace hbias {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kAbsent = "-";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (true) {
        const std::size_t p = line.find('\t', b);
        out.push_back(line.substr(b, p == std::string::npos ? std::string::npos : p - b));
        if (p == std::string::npos) break;
        b = p + 1;
    }
    return out;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::string opt(const Token& t) { return t.empty() ? kAbsent : t; }
Token unopt(const std::string& s) { return s == kAbsent ? Token{} : s; }

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json sizes_json(const SplitSizes& s) {
    return {{"train", s.train}, {"val", s.val}, {"test", s.test}, {"gen", s.gen}};
}

}  // namespace

void write_bundle(const DatasetBundle& bundle, const fs::path& dir) {
    fs::create_directories(dir);
    for (Split split : kAllSplits) {
        const auto& examples = bundle.split(split);
        std::string tsv, trees, meta;
        bool any_tree = false;
        for (const auto& e : examples) {
            tsv += join_tokens(e.input) + '\t' + join_tokens(e.output) + '\n';
            any_tree = any_tree || e.input_tree || e.output_tree;
            trees += (e.input_tree ? e.input_tree->to_string() : kAbsent);
            trees += '\t';
            trees += (e.output_tree ? e.output_tree->to_string() : kAbsent);
            trees += '\n';
            const EvalMeta& m = e.meta;
            meta += std::string(to_string(e.family)) + '\t' + std::string(to_string(e.tag)) + '\t' + opt(m.main_aux) +
                    '\t' + opt(m.first_aux) + '\t' + (m.verb_index ? std::to_string(*m.verb_index) : kAbsent) + '\t' +
                    opt(m.verb_hier) + '\t' + opt(m.verb_linear) + '\t' + opt(m.verb_sg) + '\t' + opt(m.verb_pl) +
                    '\n';
        }
        const std::string name(to_string(split));
        write_file(dir / (name + ".tsv"), tsv);
        write_file(dir / (name + ".meta"), meta);
        if (any_tree)
            write_file(dir / (name + ".trees"), trees);
        else
            fs::remove(dir / (name + ".trees"));
    }
    const Provenance& p = bundle.provenance;
    json rules = json::object();
    for (const auto& [fam, rule] : p.target_rules) rules[std::string(to_string(fam))] = std::string(to_string(rule));
    json j = {{"seed", p.seed},
              {"grammar_hash", hex64(p.grammar_hash)},
              {"recipe", p.recipe},
              {"filters", p.filters},
              {"target_rules", rules},
              {"sizes", sizes_json(p.sizes)},
              {"bracketed", p.bracketed},
              {"right_branching", p.right_branching}};
    write_file(dir / "provenance.json", j.dump(2) + "\n");
}

DatasetBundle read_bundle(const fs::path& dir) {
    DatasetBundle b;
    const fs::path prov = dir / "provenance.json";
    {
        std::ifstream in(prov);
        if (!in) throw ParseError("missing " + prov.string());
        try {
            const json j = json::parse(in);
            Provenance& p = b.provenance;
            p.seed = j.at("seed").get<std::uint64_t>();
            p.grammar_hash = std::stoull(j.at("grammar_hash").get<std::string>(), nullptr, 16);
            p.recipe = j.at("recipe").get<std::string>();
            p.filters = j.at("filters").get<std::string>();
            for (const auto& [fam, rule] : j.at("target_rules").items())
                p.target_rules[family_from_string(fam)] = rule_from_string(rule.get<std::string>());
            const json& s = j.at("sizes");
            p.sizes = {s.at("train").get<std::size_t>(), s.at("val").get<std::size_t>(),
                       s.at("test").get<std::size_t>(), s.at("gen").get<std::size_t>()};
            p.bracketed = j.at("bracketed").get<bool>();
            p.right_branching = j.at("right_branching").get<bool>();
        } catch (const json::exception& e) {
            throw ParseError(prov.string() + ": " + e.what());
        } catch (const ConfigError& e) {
            throw ParseError(prov.string() + ": " + e.what());
        }
    }
    for (Split split : kAllSplits) {
        const std::string name(to_string(split));
        const fs::path tsv_path = dir / (name + ".tsv");
        const auto lines = read_lines(tsv_path);
        auto& out = b.split(split);
        out.resize(lines.size());
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const auto f = split_tabs(lines[i]);
            if (f.size() != 2) throw ParseError(tsv_path.string() + ": expected input<TAB>output", i + 1);
            out[i].input = split_tokens(f[0]);
            out[i].output = split_tokens(f[1]);
            if (out[i].input.empty()) throw ParseError(tsv_path.string() + ": empty input", i + 1);
        }
        const fs::path meta_path = dir / (name + ".meta");
        if (fs::exists(meta_path)) {
            const auto meta = read_lines(meta_path);
            if (meta.size() != lines.size()) throw ParseError(meta_path.string() + ": line count differs from tsv");
            for (std::size_t i = 0; i < meta.size(); ++i) {
                const auto f = split_tabs(meta[i]);
                if (f.size() != 9) throw ParseError(meta_path.string() + ": expected 9 fields", i + 1);
                try {
                    Example& e = out[i];
                    e.family = family_from_string(f[0]);
                    e.tag = tag_from_string(f[1]);
                    e.meta.main_aux = unopt(f[2]);
                    e.meta.first_aux = unopt(f[3]);
                    if (f[4] != kAbsent) e.meta.verb_index = std::stoul(f[4]);
                    e.meta.verb_hier = unopt(f[5]);
                    e.meta.verb_linear = unopt(f[6]);
                    e.meta.verb_sg = unopt(f[7]);
                    e.meta.verb_pl = unopt(f[8]);
                } catch (const ParseError& e) {
                    throw ParseError(meta_path.string() + ": " + e.what(), i + 1);
                } catch (const std::exception& e) {
                    throw ParseError(meta_path.string() + ": " + e.what(), i + 1);
                }
            }
        }
        const fs::path tree_path = dir / (name + ".trees");
        if (fs::exists(tree_path)) {
            const auto trees = read_lines(tree_path);
            if (trees.size() != lines.size()) throw ParseError(tree_path.string() + ": line count differs from tsv");
            for (std::size_t i = 0; i < trees.size(); ++i) {
                const auto f = split_tabs(trees[i]);
                if (f.size() != 2) throw ParseError(tree_path.string() + ": expected two trees", i + 1);
                try {
                    if (f[0] != kAbsent) out[i].input_tree = ParseTree::parse(f[0]);
                    if (f[1] != kAbsent) out[i].output_tree = ParseTree::parse(f[1]);
                } catch (const ParseError& e) {
                    throw ParseError(tree_path.string() + ": " + e.what(), i + 1);
                }
                const Example& e = out[i];
                const bool bracketed = b.provenance.bracketed;
                if (e.input_tree && e.input_tree->leaves() != (bracketed ? strip_brackets(e.input) : e.input))
                    throw ParseError(tree_path.string() + ": input tree leaves differ from tokens", i + 1);
                if (e.output_tree && e.output_tree->leaves() != (bracketed ? strip_brackets(e.output) : e.output))
                    throw ParseError(tree_path.string() + ": output tree leaves differ from tokens", i + 1);
            }
        }
    }
    return b;
}

}  // namespace hbias
