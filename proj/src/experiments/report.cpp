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

#include "hbias/experiments/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hbias/errors.hpp"
#include "hbias/experiments/catalog.hpp"
#include "hbias/experiments/sweep.hpp"

namespace hbias {
namespace fs = std::filesystem;

namespace {

nlohmann::json read_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot read " + file.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(file.string() + ": " + e.what());
    }
}

std::string fmt(double v, const char* spec = "%.4f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string csv_cell(const std::optional<double>& v) { return v ? fmt(*v, "%.6g") : std::string(); }

const char* kCsvColumns[] = {"test_full_acc", "gen_first_word_acc", "gen_main_verb_acc", "first_aux_prop",
                             "other_prop"};

}  // namespace

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {"test_full_acc",  "gen_first_word_acc", "gen_main_verb_acc",
                                                   "main_aux_prop",  "first_aux_prop",     "other_prop",
                                                   "main_verb_lemma_acc", "truncated_prop"};
    return names;
}

std::optional<double> metric_value(const MetricsReport& m, std::string_view name) {
    if (name == "test_full_acc") return m.test_full_acc;
    if (name == "gen_first_word_acc") return m.gen_first_word_acc;
    if (name == "gen_main_verb_acc") return m.gen_main_verb_acc;
    if (name == "main_aux_prop") return m.main_aux_prop;
    if (name == "first_aux_prop") return m.first_aux_prop;
    if (name == "other_prop") return m.other_prop;
    if (name == "main_verb_lemma_acc") return m.main_verb_lemma_acc;
    if (name == "truncated_prop") return m.truncated_prop;
    throw ContractViolation("unknown metric '" + std::string(name) + "'");
}

double median(std::vector<double> v) {
    if (v.empty()) throw ContractViolation("median of an empty list");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

std::vector<Aggregate> ReportTable::aggregates() const {
    std::vector<Aggregate> out;
    for (const auto& c : configs) {
        Aggregate a;
        a.config = c;
        std::map<std::string, std::vector<double>> values;
        for (const auto& r : rows) {
            if (r.config != c) continue;
            ++a.runs;
            for (const auto& name : metric_names())
                if (auto v = metric_value(r.metrics, name)) values[name].push_back(*v);
        }
        for (auto& [name, vs] : values) {
            a.min[name] = *std::min_element(vs.begin(), vs.end());
            a.max[name] = *std::max_element(vs.begin(), vs.end());
            a.median[name] = median(std::move(vs));
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::optional<Aggregate> ReportTable::aggregate(std::string_view config) const {
    for (auto& a : aggregates())
        if (a.config == config) return std::move(a);
    return std::nullopt;
}

nlohmann::json ReportTable::to_json() const {
    nlohmann::json rs = nlohmann::json::array(), fs_ = nlohmann::json::array(), ag = nlohmann::json::array();
    for (const auto& r : rows) rs.push_back({{"config", r.config}, {"seed", r.seed}, {"metrics", r.metrics.to_json()}});
    for (const auto& f : failures) fs_.push_back({{"config", f.config}, {"seed", f.seed}, {"reason", f.reason}});
    for (const auto& a : aggregates())
        ag.push_back({{"config", a.config}, {"runs", a.runs}, {"median", a.median}, {"min", a.min}, {"max", a.max}});
    return {{"experiment", experiment}, {"configs", configs}, {"rows", rs}, {"failures", fs_}, {"aggregates", ag}};
}

ReportTable ReportTable::from_json(const nlohmann::json& j) {
    try {
        ReportTable t;
        t.experiment = j.at("experiment").get<std::string>();
        t.configs = j.at("configs").get<std::vector<std::string>>();
        for (const auto& r : j.at("rows"))
            t.rows.push_back({r.at("config").get<std::string>(), r.at("seed").get<std::uint64_t>(),
                              MetricsReport::from_json(r.at("metrics"))});
        for (const auto& f : j.at("failures"))
            t.failures.push_back({f.at("config").get<std::string>(), f.at("seed").get<std::uint64_t>(),
                                  f.at("reason").get<std::string>()});
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad report: ") + e.what());
    }
}

ReportTable load_results(const fs::path& dir) {
    if (!fs::exists(dir / "spec.json")) throw Error(dir.string() + " is not a sweep directory (no spec.json)");
    const ExperimentSpec spec = ExperimentSpec::from_json(read_json(dir / "spec.json"));
    ReportTable t;
    t.experiment = spec.id;
    for (const auto& p : spec.points) {
        t.configs.push_back(p.name);
        for (auto seed : spec.seeds) {
            const fs::path rd = run_dir(dir, p.name, seed);
            if (fs::exists(rd / "metrics.json"))
                t.rows.push_back({p.name, seed, MetricsReport::from_json(read_json(rd / "metrics.json"))});
            else if (fs::exists(rd / "error.json"))
                t.failures.push_back({p.name, seed, read_json(rd / "error.json").value("reason", "unknown")});
            else
                t.failures.push_back({p.name, seed, "not run"});
        }
    }
    return t;
}

std::vector<ReportTable> load_result_tree(const fs::path& dir) {
    if (fs::exists(dir / "spec.json")) return {load_results(dir)};
    std::vector<fs::path> subs;
    if (fs::is_directory(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory() && fs::exists(e.path() / "spec.json")) subs.push_back(e.path());
    if (subs.empty()) throw Error("no sweep results under " + dir.string());
    std::sort(subs.begin(), subs.end());
    std::vector<ReportTable> out;
    for (const auto& s : subs) out.push_back(load_results(s));
    return out;
}

ReportFormat report_format_from_string(std::string_view s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    throw ConfigError("unknown report format '" + std::string(s) + "' (expected csv, json or markdown)");
}

std::string render_report(const std::vector<ReportTable>& tables, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& t : tables) arr.push_back(t.to_json());
        out << nlohmann::json{{"tables", arr}}.dump(2) << '\n';
        return out.str();
    }
    if (format == ReportFormat::Csv) {
        out << "experiment,config,seed";
        for (const char* c : kCsvColumns) out << ',' << c;
        out << '\n';
        for (const auto& t : tables) {
            for (const auto& r : t.rows) {
                out << t.experiment << ',' << r.config << ',' << r.seed;
                for (const char* c : kCsvColumns) out << ',' << csv_cell(metric_value(r.metrics, c));
                out << '\n';
            }
            for (const auto& a : t.aggregates()) {
                out << t.experiment << ',' << a.config << ",median";
                for (const char* c : kCsvColumns) {
                    auto it = a.median.find(c);
                    out << ',' << (it == a.median.end() ? std::string() : fmt(it->second, "%.6g"));
                }
                out << '\n';
            }
        }
        return out.str();
    }
    for (const auto& t : tables) {
        const auto aggs = t.aggregates();
        bool any_q = false, any_r = false;
        for (const auto& a : aggs) {
            any_q |= a.median.count("gen_first_word_acc") > 0;
            any_r |= a.median.count("gen_main_verb_acc") > 0;
        }
        const char* gen_header = any_q && any_r ? "Gen first-word / main-verb" : any_r ? "Gen main-verb" : "Gen first-word";
        out << "### " << t.experiment << "\n\n";
        out << "| Model | Runs | Test full-sentence | " << gen_header << " |\n";
        out << "|---|---:|---:|---:|\n";
        for (const auto& a : aggs) {
            auto cell = [&](const char* name) {
                auto it = a.median.find(name);
                return it == a.median.end() ? std::string("n/a") : fmt(it->second, "%.2f");
            };
            const char* gen = a.median.count("gen_first_word_acc") ? "gen_first_word_acc" : "gen_main_verb_acc";
            out << "| " << a.config << " | " << a.runs << " | " << cell("test_full_acc") << " | " << cell(gen)
                << " |\n";
        }
        out << "\nMedians over completed runs.\n";
        if (!t.failures.empty()) {
            out << "\nIncomplete runs:\n\n";
            for (const auto& f : t.failures) out << "- " << f.config << " seed " << f.seed << ": " << f.reason << '\n';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace hbias
