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

#include "hbias/dataset/dataset.hpp"

#include <functional>
#include <unordered_map>

#include "hbias/errors.hpp"

namespace hbias {

std::string_view to_string(Split s) {
    switch (s) {
        case Split::Train:
            return "train";
        case Split::Val:
            return "val";
        case Split::Test:
            return "test";
        case Split::Gen:
            return "gen";
    }
    return "?";
}

std::string_view to_string(Tag t) {
    switch (t) {
        case Tag::AmbiguousConsistent:
            return "ambiguous";
        case Tag::WithheldGeneralization:
            return "withheld";
        case Tag::UnambiguousHierarchical:
            return "unambiguous-hierarchical";
        case Tag::UnambiguousLinear:
            return "unambiguous-linear";
    }
    return "?";
}

Tag tag_from_string(std::string_view s) {
    for (auto t : {Tag::AmbiguousConsistent, Tag::WithheldGeneralization, Tag::UnambiguousHierarchical,
                   Tag::UnambiguousLinear})
        if (to_string(t) == s) return t;
    throw ParseError("unknown example tag '" + std::string(s) + "'");
}

std::size_t SplitSizes::of(Split s) const {
    switch (s) {
        case Split::Train:
            return train;
        case Split::Val:
            return val;
        case Split::Test:
            return test;
        case Split::Gen:
            return gen;
    }
    return 0;
}

std::vector<Example>& DatasetBundle::split(Split s) {
    return const_cast<std::vector<Example>&>(static_cast<const DatasetBundle&>(*this).split(s));
}

const std::vector<Example>& DatasetBundle::split(Split s) const {
    switch (s) {
        case Split::Train:
            return train;
        case Split::Val:
            return val;
        case Split::Test:
            return test;
        case Split::Gen:
            return gen;
    }
    throw ContractViolation("unknown split");
}

// ---------------------------------------------------------------------------
// Filters

namespace {

std::string_view aux_number(const ParsedSentence& s, std::size_t i) {
    const std::string& label = leaf_infos(s.tree)[i].leaf->label();
    return std::string_view(label).substr(label.find('_') + 1);
}

}  // namespace

bool question_train_eligible(const ParsedSentence& s, const Token& task) {
    return task != transform_task(Family::Question) || !s.subject_has_rc();
}

bool question_gen_eligible(const ParsedSentence& s) {
    if (!s.subject_has_rc() || !s.ann.first_aux) return false;
    const std::size_t m = s.ann.main_finite, f = *s.ann.first_aux;
    if (s.tokens[m] == s.tokens[f]) return false;
    return aux_number(s, m) == aux_number(s, f);
}

bool reinflection_train_eligible(const ParsedSentence& s, const Token& task) {
    if (task != transform_task(Family::Reinflection)) return true;
    for (const auto& v : s.ann.slots)
        if (v.subject_number != v.recent_number) return false;
    return true;
}

bool reinflection_gen_eligible(const ParsedSentence& s) {
    const VerbSlot& v = s.ann.main_slot();
    return v.subject_number != v.recent_number;
}

// ---------------------------------------------------------------------------
// Examples and builders

Example make_example(const ParsedSentence& s, TransformRule rule, Tag tag) {
    Example e;
    e.family = s.family;
    e.tag = tag;
    e.input = s.tokens;
    e.input.push_back(s.task);
    e.output = apply_transform(s, rule);
    e.input_tree = ParseTree::node("INPUT", s.tree, ParseTree::leaf(s.task, "TASK"));
    e.output_tree = transform_tree(s, rule);
    if (s.family == Family::Question) {
        e.meta.main_aux = s.tokens[s.ann.main_finite];
        e.meta.first_aux = s.tokens[*s.ann.first_aux];
    } else {
        const VerbSlot& v = s.ann.main_slot();
        e.meta.verb_index = v.index;
        e.meta.verb_sg = v.present_sg;
        e.meta.verb_pl = v.present_pl;
        e.meta.verb_hier = v.subject_number == Number::Singular ? v.present_sg : v.present_pl;
        e.meta.verb_linear = v.recent_number == Number::Singular ? v.present_sg : v.present_pl;
    }
    return e;
}

namespace {

using Draw = std::function<std::optional<Example>(Split, Rng&)>;

// Fills splits in the order gen, test, val, train so the scarce withheld
// examples are claimed first; an input belongs to at most one split.
void fill(DatasetBundle& b, const SplitSizes& sizes, Rng& rng, const Draw& draw) {
    std::unordered_map<std::string, Split> owner;
    for (Split split : {Split::Gen, Split::Test, Split::Val, Split::Train}) {
        auto& out = b.split(split);
        const std::size_t need = sizes.of(split);
        out.reserve(need);
        constexpr std::size_t kRejectLimit = 500;  // consecutive failed draws
        std::size_t rejected = 0;
        while (out.size() < need) {
            std::optional<Example> e = draw(split, rng);
            bool ok = e.has_value();
            if (ok) {
                auto [it, inserted] = owner.emplace(join_tokens(e->input), split);
                ok = inserted || it->second == split;
            }
            if (!ok) {
                if (++rejected > kRejectLimit)
                    throw CapacityError("cannot reach " + std::to_string(need) + " " + std::string(to_string(split)) +
                                        " examples under the filters (got " + std::to_string(out.size()) + ")");
                continue;
            }
            out.push_back(std::move(*e));
            rejected = 0;
        }
    }
}

Token pick_task(Family f, Rng& rng) { return rng.bernoulli(0.5) ? transform_task(f) : identity_task(f); }

TransformRule hierarchical_rule(Family f) {
    return f == Family::Question ? TransformRule::MoveMain : TransformRule::AgreeSubject;
}

TransformRule identity_rule(Family f) {
    return f == Family::Question ? TransformRule::IdentityDecl : TransformRule::IdentityPast;
}

bool gen_eligible(const ParsedSentence& s) {
    return s.family == Family::Question ? question_gen_eligible(s) : reinflection_gen_eligible(s);
}

bool train_eligible(const ParsedSentence& s) {
    return s.family == Family::Question ? question_train_eligible(s, s.task) : reinflection_train_eligible(s, s.task);
}

// Standard ambiguous task: filtered training distribution, withheld shape in
// gen. The task is drawn first and the sentence is then rejection-sampled,
// so the filters do not skew the task balance.
Draw ambiguous_draw(const Grammar& g, Family f) {
    return [&g, f](Split split, Rng& rng) -> std::optional<Example> {
        constexpr int kTries = 1000;
        const Token task = split == Split::Gen ? transform_task(f) : pick_task(f, rng);
        for (int i = 0; i < kTries; ++i) {
            ParsedSentence s = sample_sentence(g, f, rng);
            s.task = task;
            if (split == Split::Gen) {
                if (gen_eligible(s)) return make_example(s, hierarchical_rule(f), Tag::WithheldGeneralization);
                continue;
            }
            if (!train_eligible(s)) continue;
            const TransformRule r = task == transform_task(f) ? hierarchical_rule(f) : identity_rule(f);
            return make_example(s, r, Tag::AmbiguousConsistent);
        }
        return std::nullopt;
    };
}

// Unfiltered distribution with outputs under `rule`; gen holds fresh
// disambiguating examples.
Draw unambiguous_draw(const Grammar& g, TransformRule rule) {
    const Family f = rule_family(rule);
    const TransformRule other = f == Family::Question
                                    ? (rule == TransformRule::MoveMain ? TransformRule::MoveFirst : TransformRule::MoveMain)
                                    : (rule == TransformRule::AgreeSubject ? TransformRule::AgreeRecent
                                                                           : TransformRule::AgreeSubject);
    const Tag decisive = is_hierarchical(rule) ? Tag::UnambiguousHierarchical : Tag::UnambiguousLinear;
    return [&g, f, rule, other, decisive](Split split, Rng& rng) -> std::optional<Example> {
        if (split == Split::Gen) {
            constexpr int kTries = 1000;
            for (int i = 0; i < kTries; ++i) {
                ParsedSentence s = sample_sentence(g, f, rng);
                s.task = transform_task(f);
                if (gen_eligible(s)) return make_example(s, rule, decisive);
            }
            return std::nullopt;
        }
        ParsedSentence s = sample_sentence(g, f, rng);
        s.task = pick_task(f, rng);
        if (s.task == identity_task(f)) return make_example(s, identity_rule(f), Tag::AmbiguousConsistent);
        const bool differs = apply_transform(s, rule) != apply_transform(s, other);
        return make_example(s, rule, differs ? decisive : Tag::AmbiguousConsistent);
    };
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b) { return (a ^ b) * 0x100000001b3ULL + (a << 1); }

}  // namespace

DatasetBundle build_question_splits(const Grammar& grammar, const SplitSizes& sizes, Rng& rng) {
    DatasetBundle b;
    fill(b, sizes, rng, ambiguous_draw(grammar, Family::Question));
    b.provenance.grammar_hash = grammar.hash();
    b.provenance.sizes = sizes;
    b.provenance.target_rules = {{Family::Question, TransformRule::MoveMain}};
    b.provenance.filters =
        "train/val/test: decl all shapes, quest without RC on subject; gen: quest with RC on subject, "
        "auxiliaries differ and agree in number";
    return b;
}

DatasetBundle build_reinflection_splits(const Grammar& grammar, const SplitSizes& sizes, Rng& rng) {
    DatasetBundle b;
    fill(b, sizes, rng, ambiguous_draw(grammar, Family::Reinflection));
    b.provenance.grammar_hash = grammar.hash();
    b.provenance.sizes = sizes;
    b.provenance.target_rules = {{Family::Reinflection, TransformRule::AgreeSubject}};
    b.provenance.filters =
        "train/val/test: past all shapes, present only when every verb's most recent noun matches its subject; "
        "gen: present with main-verb attractor";
    return b;
}

DatasetBundle build_unambiguous_splits(const Grammar& grammar, TransformRule rule, const SplitSizes& sizes, Rng& rng) {
    if (rule == TransformRule::IdentityDecl || rule == TransformRule::IdentityPast)
        throw ConfigError("unambiguous training needs a transforming rule");
    DatasetBundle b;
    fill(b, sizes, rng, unambiguous_draw(grammar, rule));
    b.provenance.grammar_hash = grammar.hash();
    b.provenance.sizes = sizes;
    b.provenance.target_rules = {{rule_family(rule), rule}};
    b.provenance.filters = "train/val/test: unfiltered, outputs under " + std::string(to_string(rule)) +
                           "; gen: fresh disambiguating examples";
    return b;
}

DatasetBundle build_multitask(const Grammar& question, const Grammar& reinflection, Family ambiguous,
                              const SplitSizes& sizes, Rng& rng) {
    const Grammar& amb_g = ambiguous == Family::Question ? question : reinflection;
    const Family other = ambiguous == Family::Question ? Family::Reinflection : Family::Question;
    const Grammar& other_g = ambiguous == Family::Question ? reinflection : question;
    const Draw amb = ambiguous_draw(amb_g, ambiguous);
    const Draw unamb = unambiguous_draw(other_g, hierarchical_rule(other));
    DatasetBundle b;
    fill(b, sizes, rng, [&](Split split, Rng& r) -> std::optional<Example> {
        if (split == Split::Gen || r.bernoulli(0.5)) return amb(split, r);
        return unamb(split, r);
    });
    b.provenance.grammar_hash = combine(question.hash(), reinflection.hash());
    b.provenance.sizes = sizes;
    b.provenance.target_rules = {{Family::Question, TransformRule::MoveMain},
                                 {Family::Reinflection, TransformRule::AgreeSubject}};
    b.provenance.filters = "50/50 task mix; ambiguous " + std::string(to_string(ambiguous)) +
                           " filtered as usual; " + std::string(to_string(other)) +
                           " unfiltered under its hierarchical rule; gen: ambiguous task only";
    return b;
}

// ---------------------------------------------------------------------------
// Brackets and right-branching trees

namespace {

void emit_brackets(const ParseTree& t, Tokens& out, bool open) {
    if (t.is_leaf()) {
        out.push_back(t.token());
        return;
    }
    const bool flat = t.category() == "S";
    if (open && !flat) out.push_back(kOpenBracket);
    emit_brackets(t.left(), out, true);
    emit_brackets(t.right(), out, true);
    if (open && !flat) out.push_back(kCloseBracket);
}

}  // namespace

Tokens bracket_tokens(const ParseTree& tree) {
    Tokens out;
    emit_brackets(tree, out, true);
    return out;
}

Example bracketize(const Example& e) {
    if (!e.input_tree || !e.output_tree) throw ContractViolation("bracketing needs gold trees");
    Example b = e;
    b.input = bracket_tokens(*e.input_tree);
    b.output = bracket_tokens(*e.output_tree);
    return b;
}

Tokens strip_brackets(const Tokens& tokens) {
    Tokens out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (t != kOpenBracket && t != kCloseBracket) out.push_back(t);
    return out;
}

ParseTree right_branching_tree(const Tokens& tokens) {
    if (tokens.empty()) throw ContractViolation("right-branching tree needs tokens");
    ParseTree t = ParseTree::leaf(tokens.back());
    for (std::size_t i = tokens.size() - 1; i-- > 0;) t = ParseTree::node("RB", ParseTree::leaf(tokens[i]), std::move(t));
    return t;
}

Example right_branch(const Example& e) {
    Example r = e;
    const Tokens sentence(e.input.begin(), e.input.end() - 1);
    r.input_tree = ParseTree::node("INPUT", right_branching_tree(sentence), ParseTree::leaf(e.task(), "TASK"));
    r.output_tree = right_branching_tree(e.output);
    return r;
}

// ---------------------------------------------------------------------------
// Recipes

Recipe Recipe::parse(std::string_view text) {
    Recipe r;
    std::vector<std::string> parts;
    std::size_t b = 0;
    while (true) {
        const std::size_t p = text.find('+', b);
        parts.emplace_back(text.substr(b, p == std::string_view::npos ? std::string_view::npos : p - b));
        if (p == std::string_view::npos) break;
        b = p + 1;
    }
    const std::string& base = parts[0];
    if (base == "question") {
        r.kind = Kind::Question;
    } else if (base == "reinflection") {
        r.kind = Kind::Reinflection;
    } else if (base.starts_with("unambiguous:")) {
        r.kind = Kind::Unambiguous;
        r.rule = rule_from_string(base.substr(12));
        if (r.rule == TransformRule::IdentityDecl || r.rule == TransformRule::IdentityPast)
            throw ConfigError("unambiguous recipe needs a transforming rule");
    } else if (base.starts_with("multitask:")) {
        r.kind = Kind::Multitask;
        r.ambiguous = family_from_string(base.substr(10));
    } else {
        throw ConfigError("unknown dataset recipe '" + std::string(text) + "'");
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i] == "aux")
            r.aux = true;
        else if (parts[i] == "brackets")
            r.brackets = true;
        else if (parts[i] == "rightbranch")
            r.right_branching = true;
        else
            throw ConfigError("unknown recipe flag '" + parts[i] + "'");
    }
    return r;
}

std::string Recipe::to_string() const {
    std::string s;
    switch (kind) {
        case Kind::Question:
            s = "question";
            break;
        case Kind::Reinflection:
            s = "reinflection";
            break;
        case Kind::Unambiguous:
            s = "unambiguous:" + std::string(hbias::to_string(rule));
            break;
        case Kind::Multitask:
            s = "multitask:" + std::string(hbias::to_string(ambiguous));
            break;
    }
    if (aux) s += "+aux";
    if (brackets) s += "+brackets";
    if (right_branching) s += "+rightbranch";
    return s;
}

std::vector<Family> Recipe::families() const {
    switch (kind) {
        case Kind::Question:
            return {Family::Question};
        case Kind::Reinflection:
            return {Family::Reinflection};
        case Kind::Unambiguous:
            return {rule_family(rule)};
        case Kind::Multitask:
            return {Family::Question, Family::Reinflection};
    }
    return {};
}

DatasetBundle build_from_recipe(const Recipe& recipe, const SplitSizes& sizes, std::uint64_t seed) {
    Rng rng(seed);
    const Grammar question = default_grammar(GrammarKind::Question);
    const Grammar reinflection =
        default_grammar(recipe.aux ? GrammarKind::ReinflectionAux : GrammarKind::Reinflection);
    DatasetBundle b;
    switch (recipe.kind) {
        case Recipe::Kind::Question:
            b = build_question_splits(question, sizes, rng);
            break;
        case Recipe::Kind::Reinflection:
            b = build_reinflection_splits(reinflection, sizes, rng);
            break;
        case Recipe::Kind::Unambiguous:
            b = build_unambiguous_splits(rule_family(recipe.rule) == Family::Question ? question : reinflection,
                                         recipe.rule, sizes, rng);
            break;
        case Recipe::Kind::Multitask:
            b = build_multitask(question, reinflection, recipe.ambiguous, sizes, rng);
            break;
    }
    for (Split s : kAllSplits) {
        for (auto& e : b.split(s)) {
            if (recipe.right_branching) e = right_branch(e);
            if (recipe.brackets) e = bracketize(e);
        }
    }
    b.provenance.seed = seed;
    b.provenance.recipe = recipe.to_string();
    b.provenance.bracketed = recipe.brackets;
    b.provenance.right_branching = recipe.right_branching;
    return b;
}

}  // namespace hbias
