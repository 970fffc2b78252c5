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

// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion.
//
//   hbias_acceptance properties
//   hbias_acceptance reproduction [--results DIR]
//
// Property criteria need no training. Reproduction criteria read finished
// sweeps (one directory per catalog experiment, as written by `hbias
// sweep`) from --results or $HBIAS_RESULTS_DIR. Exit status: 0 when every
// criterion passed, 1 when any failed, 77 when nothing failed but some
// criterion could not be evaluated.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradcheck.hpp"
#include "hbias/cells/cell.hpp"
#include "hbias/dataset/dataset.hpp"
#include "hbias/experiments/catalog.hpp"
#include "hbias/experiments/report.hpp"
#include "hbias/grammar/grammar.hpp"
#include "hbias/grammar/sentence.hpp"
#include "hbias/models/seq2seq.hpp"
#include "scan_oracle.hpp"

using namespace hbias;
namespace fs = std::filesystem;

namespace {

// ---- tolerances -----------------------------------------------------------

constexpr std::size_t kOracleMaxLength = 12;
constexpr double kOracleSeconds = 60;

constexpr double kGradStep = 1e-5;
constexpr double kGradRelTolerance = 1e-4;
constexpr double kGradSeconds = 300;

constexpr int kBoundSteps = 100000;
constexpr int kForcedSteps = 50;
constexpr double kForcedMagnitude = 10;
constexpr double kBoundSeconds = 60;

constexpr double kAttentionSumTolerance = 1e-12;

constexpr unsigned kSeedsRequired = 10;
constexpr double kConvergedTestAcc = 0.5;  // R3 and R7 "converged"

enum class Verdict { Pass, Fail, Skip };

struct Line {
    std::string id;
    Verdict verdict;
    std::string detail;
};

std::vector<Line> g_lines;

void report(const std::string& id, Verdict v, const std::string& detail) {
    static const char* names[] = {"PASS", "FAIL", "SKIP"};
    std::printf("%-3s %s  %s\n", id.c_str(), names[static_cast<int>(v)], detail.c_str());
    std::fflush(stdout);
    g_lines.push_back({id, v, detail});
}

Verdict pass_if(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

std::string fmt(double x, int digits = 3) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---- P1 -------------------------------------------------------------------

void p1_oracle() {
    Stopwatch clock;
    std::size_t sentences = 0, mismatches = 0;
    std::string first_bad;
    auto note = [&](bool ok, const ParsedSentence& s, TransformRule r) {
        if (ok) return;
        if (mismatches++ == 0) first_bad = std::string(to_string(r)) + ": " + join_tokens(s.tokens);
    };
    {
        const Grammar g = reduced_grammar(GrammarKind::Question);
        const testing::ScanOracle o{g.lexicon()};
        for (const ParseTree& t : g.enumerate(kOracleMaxLength)) {
            const auto s = annotate(t, g.lexicon(), Family::Question, "quest");
            note(apply_transform(s, TransformRule::MoveMain) == o.move_main(s), s, TransformRule::MoveMain);
            note(apply_transform(s, TransformRule::MoveFirst) == o.move_first(s), s, TransformRule::MoveFirst);
            ++sentences;
        }
    }
    {
        const Grammar g = reduced_grammar(GrammarKind::Reinflection);
        const testing::ScanOracle o{g.lexicon()};
        for (const ParseTree& t : g.enumerate(kOracleMaxLength)) {
            const auto s = annotate(t, g.lexicon(), Family::Reinflection, "present");
            note(apply_transform(s, TransformRule::AgreeSubject) == o.agree(s, true), s, TransformRule::AgreeSubject);
            note(apply_transform(s, TransformRule::AgreeRecent) == o.agree(s, false), s, TransformRule::AgreeRecent);
            ++sentences;
        }
    }
    const double secs = clock.seconds();
    std::string detail = "oracle equivalence: " + std::to_string(mismatches) + " mismatches over " +
                         std::to_string(sentences) + " sentences up to length " + std::to_string(kOracleMaxLength) +
                         " (" + fmt(secs) + " s, limit " + fmt(kOracleSeconds) + " s)";
    if (!first_bad.empty()) detail += "; first: " + first_bad;
    report("P1", pass_if(mismatches == 0 && sentences > 0 && secs < kOracleSeconds), detail);
}

// ---- P2 -------------------------------------------------------------------

ModelConfig tiny(CellKind cell, Attention att, Structure enc, Structure dec) {
    ModelConfig c;
    c.cell = cell;
    c.attention = att;
    c.encoder = enc;
    c.decoder = dec;
    c.embedding = 8;
    c.hidden = 8;
    c.chunk = 4;
    c.max_positions = 16;
    return c;
}

// Five input tokens with gold trees on both sides.
Example five_token_example() {
    Example e;
    e.input = split_tokens("my yak does read quest");
    e.output = split_tokens("does my yak read ?");
    e.input_tree = ParseTree::parse("(INPUT (S (NP my yak) (VP does read)) quest)");
    e.output_tree = ParseTree::parse("(Q (SQ does (SI (NP my yak) read)) ?)");
    return e;
}

constexpr CellKind kAllCells[] = {CellKind::SRN,          CellKind::GRU,           CellKind::LSTM,
                                  CellKind::SquashedLSTM, CellKind::UnsquashedGRU, CellKind::ONLSTM};

void p2_gradients() {
    Stopwatch clock;
    const Example e = five_token_example();
    const Vocab vocab = Vocab::standard();
    double worst = 0, worst_abs = 0;
    std::string worst_where;
    std::size_t models = 0, coords = 0;
    auto run = [&](const ModelConfig& c, Seq2Seq::Feed feed) {
        Seq2Seq m(c, vocab, 31);
        Rng rng(32);
        // Every parameter entry, not a sample.
        const auto r = testing::grad_check(
            m.params(), [&](Tape& t) { return m.loss(t, e, feed).total; }, 0, rng, kGradStep);
        ++models;
        coords += r.checked;
        worst_abs = std::max(worst_abs, r.max_abs_error);
        if (r.max_rel_error >= worst) {
            worst = r.max_rel_error;
            worst_where = c.label() + (feed == Seq2Seq::Feed::Gold ? " gold-fed: " : " self-fed: ") + r.worst;
        }
    };
    const auto Seq = Structure::Sequential, Tree = Structure::Tree;
    for (auto cell : kAllCells)
        for (auto att : {Attention::None, Attention::Location, Attention::Content})
            run(tiny(cell, att, Seq, Seq), Seq2Seq::Feed::Gold);
    for (auto enc : {Seq, Tree})
        for (auto dec : {Seq, Tree})
            for (auto feed : {Seq2Seq::Feed::Gold, Seq2Seq::Feed::Own}) run(tiny(CellKind::GRU, Attention::None, enc, dec), feed);
    const double secs = clock.seconds();
    report("P2", pass_if(worst < kGradRelTolerance && secs < kGradSeconds),
           "gradient checks: max relative error " + fmt(worst) + " (limit " + fmt(kGradRelTolerance) + ", h=" +
               fmt(kGradStep) + "), max absolute difference " + fmt(worst_abs) + ", over " + std::to_string(models) + " models, " + std::to_string(coords) +
               " coordinates; 6 cells x 3 attentions, 4 structures x 2 feeds (" + fmt(secs) + " s, limit " +
               fmt(kGradSeconds) + " s)" + (worst > 0 ? "; worst at " + worst_where : std::string()));
}

// ---- P3 -------------------------------------------------------------------

// Saturating bias; sigmoid(40) == 1 to double precision.
constexpr Real kSat = 40;

void set_gate_bias(Cell& c, int index, Real v) {
    c.b().value.block(Eigen::Index(index) * c.hidden_size(), 0, c.hidden_size(), 1).setConstant(v);
}

// Largest |h| (or |c|) over `steps` steps of constant zero input; returns the
// first step at which the magnitude exceeds kForcedMagnitude, if any.
std::optional<int> forced_rollout(const Cell& cell, bool watch_cell_state) {
    const int H = cell.hidden_size();
    Mat h = Mat::Zero(H, 1), c = Mat::Zero(H, 1);
    Tape t;
    for (int k = 1; k <= kForcedSteps; ++k) {
        t.clear();
        CellState s{t.constant(h), has_cell_state(cell.kind()) ? t.constant(c) : Var{}};
        CellState n = cell.step(t, s, t.constant(Mat::Zero(cell.input_size(), 1)));
        h = t.value(n.h);
        if (has_cell_state(cell.kind())) c = t.value(n.c);
        const double mag = (watch_cell_state ? c : h).cwiseAbs().maxCoeff();
        if (mag > kForcedMagnitude) return k;
    }
    return std::nullopt;
}

void p3_bounds() {
    Stopwatch clock;
    Rng rng(41);
    const int I = 4, H = 8;
    double gru_h = 0, sq_c = 0;
    for (auto kind : {CellKind::GRU, CellKind::SquashedLSTM}) {
        ParameterSet ps;
        Cell cell(kind, "c", I, H, ps, rng);
        Mat h = Mat::Zero(H, 1), c = Mat::Zero(H, 1);
        Tape t;
        for (int k = 0; k < kBoundSteps; ++k) {
            t.clear();
            Mat x(I, 1);
            for (int i = 0; i < I; ++i) x(i, 0) = static_cast<Real>(rng.uniform(-2, 2));
            CellState s{t.constant(h), has_cell_state(kind) ? t.constant(c) : Var{}};
            CellState n = cell.step(t, s, t.constant(x));
            h = t.value(n.h);
            if (has_cell_state(kind)) c = t.value(n.c);
            if (kind == CellKind::GRU) gru_h = std::max(gru_h, double(h.cwiseAbs().maxCoeff()));
            if (kind == CellKind::SquashedLSTM) sq_c = std::max(sq_c, double(c.cwiseAbs().maxCoeff()));
        }
    }

    ParameterSet ps;
    Cell lstm(CellKind::LSTM, "l", 1, 1, ps, rng);
    for (auto* p : ps.all()) p->value.setZero();
    for (int g = 0; g < 4; ++g) set_gate_bias(lstm, g, kSat);  // f = i = o = 1, g = 1
    const auto lstm_step = forced_rollout(lstm, true);

    Cell ugru(CellKind::UnsquashedGRU, "u", 1, 1, ps, rng);
    for (auto* p : ps.all())
        if (p->name.rfind("u.", 0) == 0) p->value.setZero();
    set_gate_bias(ugru, 1, kSat);  // z = 1
    set_gate_bias(ugru, 2, kSat);  // i = 1
    ugru.bx()->value.setConstant(kSat);  // candidate = 1
    const auto ugru_step = forced_rollout(ugru, false);

    const double secs = clock.seconds();
    const bool ok = gru_h < 1 && sq_c < 1 && lstm_step && ugru_step && secs < kBoundSeconds;
    auto when = [](const std::optional<int>& k) { return k ? "step " + std::to_string(*k) : std::string("never"); };
    report("P3", pass_if(ok),
           "squashing bounds: " + std::to_string(kBoundSteps) + " random steps, max |GRU h| " + fmt(gru_h, 6) +
               ", max |squashed-LSTM c| " + fmt(sq_c, 6) + " (must stay below 1); forced rollouts exceed " +
               fmt(kForcedMagnitude) + ": LSTM c at " + when(lstm_step) + ", unsquashed GRU h at " +
               when(ugru_step) + " (limit " + std::to_string(kForcedSteps) + ") (" + fmt(secs) + " s)");
}

// ---- P4 -------------------------------------------------------------------

void p4_attention() {
    Rng rng(51);
    const Vocab vocab = Vocab::standard();
    const Tokens inputs[] = {split_tokens("the yak . quest"),
                             split_tokens("the yaks who don't read do sleep . quest"),
                             split_tokens("my zebra by the yaks swam . present")};
    double worst_sum = 0, min_weight = 1;
    std::size_t distributions = 0;
    for (auto cell : kAllCells)
        for (auto att : {Attention::Location, Attention::Content}) {
            Seq2Seq m(tiny(cell, att, Structure::Sequential, Structure::Sequential), vocab, 52);
            for (const Tokens& in : inputs) {
                Tape t;
                EncoderOutput enc = m.encode_sequential(t, in);
                for (int trial = 0; trial < 20; ++trial) {
                    Mat d(8, 1), y(8, 1);
                    for (int i = 0; i < 8; ++i) {
                        d(i, 0) = static_cast<Real>(rng.uniform(-3, 3));
                        y(i, 0) = static_cast<Real>(rng.uniform(-3, 3));
                    }
                    const Mat& a = t.value(m.attention_weights(t, t.constant(d), t.constant(y), enc));
                    worst_sum = std::max(worst_sum, std::abs(double(a.sum()) - 1));
                    min_weight = std::min(min_weight, double(a.minCoeff()));
                    ++distributions;
                }
            }
        }

    // Without attention, replacing every non-final encoder state leaves
    // the decoder logits bit-identical.
    const Example e = five_token_example();
    std::size_t changed = 0, compared = 0;
    for (auto cell : kAllCells) {
        Seq2Seq m(tiny(cell, Attention::None, Structure::Sequential, Structure::Sequential), vocab, 53);
        Tape t;
        EncoderOutput enc = m.encode(t, e);
        DecodeTrace a = m.decode_sequential(t, enc, &e.output, Seq2Seq::Feed::Gold, 0);
        EncoderOutput perturbed = enc;
        for (std::size_t j = 0; j + 1 < perturbed.states.size(); ++j) {
            Mat r(8, 1);
            for (int i = 0; i < 8; ++i) r(i, 0) = static_cast<Real>(rng.uniform(-1, 1));
            perturbed.states[j] = t.constant(r);
        }
        perturbed.memory = t.hstack(perturbed.states);
        DecodeTrace b = m.decode_sequential(t, perturbed, &e.output, Seq2Seq::Feed::Gold, 0);
        for (std::size_t i = 0; i < a.logits.size(); ++i, ++compared)
            if (t.value(a.logits[i]) != t.value(b.logits[i])) ++changed;
    }
    report("P4", pass_if(worst_sum < kAttentionSumTolerance && min_weight >= 0 && changed == 0 && compared > 0),
           "attention: max |sum(alpha) - 1| " + fmt(worst_sum) + " (limit " + fmt(kAttentionSumTolerance) +
               ") over " + std::to_string(distributions) + " distributions, min weight " + fmt(min_weight) +
               "; no-attention bottleneck: " + std::to_string(changed) + " of " + std::to_string(compared) +
               " logit vectors changed under non-final state perturbation");
}

// ---- P5 -------------------------------------------------------------------

struct FilterScan {
    std::size_t scanned = 0;
    std::vector<std::string> violations;

    void flag(const std::string& what, const Example& e) {
        if (violations.size() < 3) violations.push_back(what + ": " + join_tokens(e.input));
        else violations.push_back(what);
    }
};

ParsedSentence sentence_of(const Example& e, const Lexicon& lex, Family f) {
    if (!e.input_tree) throw std::logic_error("example without input tree");
    return annotate(e.input_tree->left(), lex, f, e.task());
}

void p5_filters() {
    Stopwatch clock;
    const SplitSizes sizes;  // full-size splits
    FilterScan scan;
    const Lexicon lex = Lexicon::parse(default_lexicon_text());
    const testing::ScanOracle o{lex};
    auto aux_number = [&](const Token& t) {
        const auto& sg = lex.words("AUX_SG");
        return std::find(sg.begin(), sg.end(), t) != sg.end() ? 0 : 1;
    };
    // The subject carries a relative clause iff a relativizer precedes the
    // main auxiliary (prepositional phrases never contain one).
    auto rc_on_subject = [&](const ParsedSentence& s) {
        const std::size_t main = o.shallowest(s, testing::is_aux_leaf);
        for (std::size_t i = 0; i < main; ++i)
            if (lex.is_relativizer(s.tokens[i])) return true;
        return false;
    };

    const DatasetBundle q = build_from_recipe(Recipe::parse("question"), sizes, 1);
    std::size_t train_quest = 0;
    for (Split split : {Split::Train, Split::Val, Split::Test})
        for (const Example& e : q.split(split)) {
            ++scan.scanned;
            if (e.task() != "quest") continue;
            const auto s = sentence_of(e, lex, Family::Question);
            if (split == Split::Train) ++train_quest;
            if (rc_on_subject(s)) scan.flag(std::string(to_string(split)) + " quest with RC on subject", e);
        }
    for (const Example& e : q.gen) {
        ++scan.scanned;
        const auto s = sentence_of(e, lex, Family::Question);
        const Token main = s.tokens[o.shallowest(s, testing::is_aux_leaf)];
        const Token first = s.tokens[o.first_aux(s)];
        if (e.task() != "quest") scan.flag("gen task is not quest", e);
        if (!rc_on_subject(s)) scan.flag("gen without RC on subject", e);
        if (o.move_main(s)[0] == o.move_first(s)[0]) scan.flag("gen rules agree on first word", e);
        if (main == first) scan.flag("gen auxiliaries identical", e);
        if (aux_number(main) != aux_number(first)) scan.flag("gen auxiliaries differ in number", e);
        if (e.output != o.move_main(s)) scan.flag("gen gold is not the hierarchical output", e);
    }

    const DatasetBundle r = build_from_recipe(Recipe::parse("reinflection"), sizes, 1);
    for (Split split : {Split::Train, Split::Val, Split::Test})
        for (const Example& e : r.split(split)) {
            ++scan.scanned;
            if (e.task() != "present") continue;
            const auto s = sentence_of(e, lex, Family::Reinflection);
            if (o.agree(s, true) != o.agree(s, false)) scan.flag(std::string(to_string(split)) + " present is ambiguous-breaking", e);
        }
    for (const Example& e : r.gen) {
        ++scan.scanned;
        const auto s = sentence_of(e, lex, Family::Reinflection);
        const std::size_t v = o.shallowest(s, testing::is_past_leaf);
        if (o.agree(s, true)[v] == o.agree(s, false)[v]) scan.flag("gen main verb agrees under both rules", e);
        if (e.output != o.agree(s, true)) scan.flag("gen gold is not the hierarchical output", e);
    }

    std::string detail = "dataset filters: " + std::to_string(scan.violations.size()) + " violations over " +
                         std::to_string(scan.scanned) + " examples (question and reinflection, full-size splits, " +
                         std::to_string(train_quest) + " training questions) (" + fmt(clock.seconds()) + " s)";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, scan.violations.size()); ++i)
        detail += "; " + scan.violations[i];
    report("P5", pass_if(scan.violations.empty() && train_quest > 0 && !q.gen.empty() && !r.gen.empty()), detail);
}

// ---- R --------------------------------------------------------------------

struct Sweep {
    ExperimentSpec spec;
    ReportTable table;
    fs::path dir;
};

// Finished sweeps under `root` (itself or its children), keyed by
// experiment id. Only desk- and paper-profile sweeps count.
std::map<std::string, Sweep> find_sweeps(const fs::path& root, std::vector<std::string>& ignored) {
    std::vector<fs::path> dirs{root};
    for (const auto& d : fs::directory_iterator(root))
        if (d.is_directory()) dirs.push_back(d.path());
    std::map<std::string, Sweep> out;
    for (const auto& d : dirs) {
        if (!fs::exists(d / "spec.json")) continue;
        std::ifstream in(d / "spec.json");
        ExperimentSpec spec = ExperimentSpec::from_json(nlohmann::json::parse(in));
        if (spec.profile.name != "desk" && spec.profile.name != "paper") {
            ignored.push_back(d.string() + " (profile " + spec.profile.name + ")");
            continue;
        }
        Sweep s{spec, load_results(d), d};
        auto it = out.find(spec.id);
        if (it == out.end() || s.table.rows.size() > it->second.table.rows.size()) out[spec.id] = std::move(s);
    }
    return out;
}

class Results {
public:
    explicit Results(std::map<std::string, Sweep> sweeps) : sweeps_(std::move(sweeps)) {}

    // Median of `metric` for one config, or an explanation of why not.
    std::optional<double> median(const std::string& exp, const std::string& config, const std::string& metric,
                                 std::string& why) const {
        auto it = sweeps_.find(exp);
        if (it == sweeps_.end()) {
            why = "no " + exp + " sweep";
            return std::nullopt;
        }
        const auto agg = it->second.table.aggregate(config);
        if (!agg || agg->runs < kSeedsRequired) {
            why = exp + "/" + config + " has " + std::to_string(agg ? agg->runs : 0) + " of " +
                  std::to_string(kSeedsRequired) + " seeds";
            return std::nullopt;
        }
        auto m = agg->median.find(metric);
        if (m == agg->median.end()) {
            why = exp + "/" + config + " lacks " + metric;
            return std::nullopt;
        }
        return m->second;
    }

    const Sweep* sweep(const std::string& exp) const {
        auto it = sweeps_.find(exp);
        return it == sweeps_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, Sweep>& all() const { return sweeps_; }

private:
    std::map<std::string, Sweep> sweeps_;
};

// Collects bound checks on medians for one criterion.
class Criterion {
public:
    Criterion(const Results& res, std::string id) : res_(res), id_(std::move(id)) {}

    std::optional<double> get(const std::string& exp, const std::string& config, const std::string& metric) {
        std::string why;
        auto v = res_.median(exp, config, metric, why);
        if (!v && missing_.empty()) missing_ = why;
        return v;
    }

    void at_least(const std::string& exp, const std::string& config, const std::string& metric, double bound) {
        if (auto v = get(exp, config, metric)) check(*v >= bound, config + " " + short_name(metric) + " " + fmt(*v) + " >= " + fmt(bound));
    }

    void at_most(const std::string& exp, const std::string& config, const std::string& metric, double bound) {
        if (auto v = get(exp, config, metric)) check(*v <= bound, config + " " + short_name(metric) + " " + fmt(*v) + " <= " + fmt(bound));
    }

    void check(bool ok, const std::string& what) {
        parts_.push_back((ok ? "" : "NOT ") + what);
        if (!ok) failed_ = true;
    }

    void skip(const std::string& why) {
        if (missing_.empty()) missing_ = why;
    }

    void finish(const std::string& title) {
        std::string detail = title;
        for (const auto& p : parts_) detail += "; " + p;
        if (failed_)
            report(id_, Verdict::Fail, detail + (missing_.empty() ? "" : "; also missing: " + missing_));
        else if (!missing_.empty())
            report(id_, Verdict::Skip, title + ": " + missing_);
        else
            report(id_, Verdict::Pass, detail);
    }

private:
    static std::string short_name(const std::string& metric) {
        if (metric == "gen_first_word_acc") return "gen first-word";
        if (metric == "gen_main_verb_acc") return "gen main-verb";
        if (metric == "test_full_acc") return "test full";
        if (metric == "main_verb_lemma_acc") return "lemma";
        return metric;
    }

    const Results& res_;
    std::string id_;
    std::vector<std::string> parts_;
    std::string missing_;
    bool failed_ = false;
};

const std::string kFirst = "gen_first_word_acc";
const std::string kVerb = "gen_main_verb_acc";
const std::string kTest = "test_full_acc";
const std::string kLemma = "main_verb_lemma_acc";

void r1(const Results& res) {
    Criterion c(res, "R1");
    const std::string exp = "unambiguous";
    for (const char* rule : {"MOVE_MAIN", "MOVE_FIRST"}) {
        c.at_least(exp, std::string("GRU-NONE-") + rule, kFirst, 0.98);
        c.at_least(exp, std::string("Tree-Tree-") + rule, kFirst, 0.98);
    }
    for (const char* rule : {"AGREE_SUBJECT", "AGREE_RECENT"}) {
        c.at_least(exp, std::string("GRU-NONE-") + rule, kVerb, 0.85);
        c.at_least(exp, std::string("Tree-Tree-") + rule, kVerb, 0.95);
    }
    c.finish("unambiguous controls");
}

void r2(const Results& res) {
    Criterion c(res, "R2");
    c.at_least("tree-models", "Tree-Tree", kFirst, 0.8);
    c.at_least("tree-models", "Tree-Tree", kTest, 0.85);
    c.at_most("tree-models", "Seq-Seq", kFirst, 0.25);
    c.finish("tree/tree generalizes hierarchically, sequential GRU does not");
}

void r3(const Results& res) {
    Criterion c(res, "R3");
    const std::string exp = "reinflection-models";
    const Sweep* s = res.sweep(exp);
    if (!s) {
        c.skip("no " + exp + " sweep");
    } else {
        for (const auto& config : s->table.configs) {
            if (config == "Tree-Tree") continue;
            auto test = c.get(exp, config, kTest);
            if (test && *test >= kConvergedTestAcc) c.at_most(exp, config, kVerb, 0.25);
        }
        c.at_least(exp, "Tree-Tree", kVerb, 0.7);
        for (const auto& config : s->table.configs) c.at_least(exp, config, kLemma, 0.87);
    }
    c.finish("reinflection: sequential models agree linearly, tree/tree hierarchically");
}

void r4(const Results& res) {
    Criterion c(res, "R4");
    const std::string exp = "squashing";
    auto order = [&](const std::string& squashed, const std::string& unsquashed) {
        auto a = c.get(exp, squashed, kFirst);
        auto b = c.get(exp, unsquashed, kFirst);
        if (a && b) c.check(*a > *b, squashed + " " + fmt(*a) + " > " + unsquashed + " " + fmt(*b));
    };
    order("GRU-LOCATION", "UNSQUASHED_GRU-LOCATION");
    order("SQUASHED_LSTM-LOCATION", "LSTM-LOCATION");
    c.finish("squashed cells beat unsquashed on gen first-word");
}

void r5(const Results& res) {
    Criterion c(res, "R5");
    const std::string exp = "structure-ablation";
    c.at_most(exp, "GRU-NONE-brackets-question", kFirst, 0.5);
    c.at_most(exp, "GRU-NONE-brackets-reinflection", kVerb, 0.5);
    c.at_most(exp, "Tree-Tree-rightbranch-question", kFirst, 0.5);
    c.at_most(exp, "Tree-Tree-rightbranch-reinflection", kVerb, 0.5);
    c.finish("brackets and right-branching trees give no hierarchical bias");
}

void r6(const Results& res) {
    Criterion c(res, "R6");
    const std::string exp = "multitask";
    c.at_least(exp, "multitask-reinflection-aux", kVerb, 0.7);
    c.at_most(exp, "multitask-reinflection", kVerb, 0.3);
    c.at_most(exp, "multitask-question", kFirst, 0.3);
    c.at_most(exp, "multitask-question-aux", kFirst, 0.3);
    c.finish("multitask with auxiliaries transfers to ambiguous reinflection");
}

void r7(const Results& res) {
    Criterion c(res, "R7");
    std::size_t converged = 0, low = 0, sweeps = 0;
    std::string example;
    for (const auto& [id, s] : res.all()) {
        // Only sweeps with every config at full seed count take part.
        bool complete = true;
        for (const auto& config : s.table.configs) {
            const auto agg = s.table.aggregate(config);
            if (!agg || agg->runs < kSeedsRequired) {
                c.skip(id + "/" + config + " has " + std::to_string(agg ? agg->runs : 0) + " of " +
                       std::to_string(kSeedsRequired) + " seeds");
                complete = false;
            }
        }
        if (!complete) continue;
        bool any_question = false;
        for (const auto& row : s.table.rows) {
            if (!row.metrics.main_aux_prop || !row.metrics.first_aux_prop || !row.metrics.test_full_acc) continue;
            any_question = true;
            if (*row.metrics.test_full_acc < kConvergedTestAcc) continue;
            ++converged;
            const double sum = *row.metrics.main_aux_prop + *row.metrics.first_aux_prop;
            if (sum < 0.9) {
                if (low++ == 0)
                    example = id + "/" + row.config + " seed " + std::to_string(row.seed) + " " + fmt(sum);
            }
        }
        sweeps += any_question;
    }
    if (converged == 0) c.skip("no converged question-formation runs (test full-sentence >= " + fmt(kConvergedTestAcc) + ")");
    else
        c.check(low == 0, std::to_string(converged - low) + " of " + std::to_string(converged) +
                              " converged runs in " + std::to_string(sweeps) +
                              " sweeps put main-aux + first-aux >= 0.9" + (low ? ", first below: " + example : ""));
    c.finish("first word is almost always one of the two auxiliaries");
}

int finish_status() {
    bool fail = false, skip = false;
    for (const auto& l : g_lines) {
        fail |= l.verdict == Verdict::Fail;
        skip |= l.verdict == Verdict::Skip;
    }
    return fail ? 1 : skip ? 77 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hbias acceptance checks"};
    app.require_subcommand(1);
    auto* props = app.add_subcommand("properties", "P1-P5, no training");
    std::vector<std::string> only;
    props->add_option("--only", only, "Run a subset, e.g. --only P1 P3");
    auto* repro = app.add_subcommand("reproduction", "R1-R7 from finished sweeps");
    std::string results;
    repro->add_option("--results", results, "Directory of sweep directories (default $HBIAS_RESULTS_DIR)");
    CLI11_PARSE(app, argc, argv);

    try {
        if (*props) {
            const std::vector<std::pair<std::string, std::function<void()>>> all = {
                {"P1", p1_oracle}, {"P2", p2_gradients}, {"P3", p3_bounds}, {"P4", p4_attention}, {"P5", p5_filters}};
            for (const auto& [id, fn] : all)
                if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) fn();
            return finish_status();
        }
        if (results.empty())
            if (const char* env = std::getenv("HBIAS_RESULTS_DIR")) results = env;
        if (results.empty() || !fs::is_directory(results)) {
            const std::string why = results.empty() ? "no results directory (--results or HBIAS_RESULTS_DIR)"
                                                    : results + " is not a directory";
            for (const char* id : {"R1", "R2", "R3", "R4", "R5", "R6", "R7"}) report(id, Verdict::Skip, why);
            return finish_status();
        }
        std::vector<std::string> ignored;
        const Results res(find_sweeps(results, ignored));
        for (const auto& d : ignored) std::printf("note: ignoring %s\n", d.c_str());
        r1(res);
        r2(res);
        r3(res);
        r4(res);
        r5(res);
        r6(res);
        r7(res);
        return finish_status();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 1;
    }
}
