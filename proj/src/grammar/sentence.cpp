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

#include "hbias/grammar/sentence.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "hbias/errors.hpp"

namespace hbias {

std::string_view to_string(Family f) { return f == Family::Question ? "question" : "reinflection"; }

Family family_from_string(std::string_view s) {
    if (s == "question") return Family::Question;
    if (s == "reinflection") return Family::Reinflection;
    throw ConfigError("unknown task family '" + std::string(s) + "'");
}

Token identity_task(Family f) { return f == Family::Question ? "decl" : "past"; }
Token transform_task(Family f) { return f == Family::Question ? "quest" : "present"; }

std::string_view to_string(Shape s) {
    switch (s) {
        case Shape::None:
            return "none";
        case Shape::PpOnSubject:
            return "pp_subject";
        case Shape::PpOnObject:
            return "pp_object";
        case Shape::RcOnSubject:
            return "rc_subject";
        case Shape::RcOnObject:
            return "rc_object";
    }
    return "?";
}

const VerbSlot& Annotations::main_slot() const {
    for (const auto& s : slots)
        if (s.main) return s;
    throw ContractViolation("sentence has no main verb slot");
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_slot_label(std::string_view label, Family family) {
    if (family == Family::Question) return label.starts_with("AUX_");
    return ends_with(label, "_PAST");
}

struct Walker {
    explicit Walker(const Lexicon& l) : lex(l) {}

    const Lexicon& lex;
    const ParseTree* main_clause = nullptr;
    std::size_t main_offset = 0;

    struct Clause {
        std::size_t begin, end;  // leaf span
        std::size_t subject;     // head noun index
    };
    std::vector<Clause> clauses;
    struct Modifier {
        std::size_t begin;
        bool rc;
    };
    std::vector<Modifier> modifiers;

    std::size_t head_noun(const ParseTree& np, std::size_t offset) const {
        if (np.is_leaf()) {
            if (!lex.is_noun(np.token())) throw ContractViolation("noun phrase without a head noun");
            return offset;
        }
        // [DET N] heads right; [NP modifier] heads left.
        if (np.left().is_leaf()) return head_noun(np.right(), offset + 1);
        return head_noun(np.left(), offset);
    }

    void visit(const ParseTree& t, std::size_t offset) {
        if (t.is_leaf()) return;
        const auto cat = t.category();
        const std::size_t n = t.leaf_count();
        if (cat == "S" && !main_clause) {
            main_clause = &t;
            main_offset = offset;
            clauses.push_back({offset, offset + n, head_noun(t.left(), offset)});
        }
        const auto rcat = t.right().category();
        if (!t.right().is_leaf() && (rcat == "RC" || rcat == "PP")) {
            const std::size_t mod_begin = offset + t.left().leaf_count();
            modifiers.push_back({mod_begin, rcat == "RC"});
            if (rcat == "RC")
                clauses.push_back({mod_begin, offset + n, head_noun(t.left(), offset)});
        }
        visit(t.left(), offset);
        visit(t.right(), offset + t.left().leaf_count());
    }
};

}  // namespace

ParsedSentence annotate(ParseTree tree, const Lexicon& lexicon, Family family, Token task) {
    ParsedSentence s;
    s.tokens = tree.leaves();
    s.family = family;
    s.task = std::move(task);

    Walker w(lexicon);
    w.visit(tree, 0);
    if (!w.main_clause) throw ContractViolation("tree has no S-labeled main clause: " + tree.to_string());
    const ParseTree& S = *w.main_clause;

    Annotations& a = s.ann;
    a.subject_head = w.clauses.front().subject;
    a.subject_number = *lexicon.noun_number(s.tokens[a.subject_head]);
    a.main_finite = w.main_offset + S.left().leaf_count();  // predicate starts with the finite element

    const std::size_t subject_end = w.main_offset + S.left().leaf_count();
    a.shape = Shape::None;
    for (const auto& m : w.modifiers) {
        const bool on_subject = m.begin < subject_end;
        if (m.rc)
            a.shape = on_subject ? Shape::RcOnSubject : Shape::RcOnObject;
        else
            a.shape = on_subject ? Shape::PpOnSubject : Shape::PpOnObject;
        break;  // the grammars allow one modifier per sentence; the outermost decides
    }

    const auto infos = leaf_infos(tree);
    std::optional<Number> recent;
    for (std::size_t i = 0; i < infos.size(); ++i) {
        const ParseTree& leaf = *infos[i].leaf;
        if (!a.first_aux && leaf.label().starts_with("AUX_")) a.first_aux = i;
        if (is_slot_label(leaf.label(), family)) {
            // innermost clause containing the slot
            const Walker::Clause* owner = nullptr;
            for (const auto& c : w.clauses)
                if (c.begin <= i && i < c.end && (!owner || c.end - c.begin < owner->end - owner->begin)) owner = &c;
            if (!owner) throw ContractViolation("verb outside every clause");
            if (!recent) throw ContractViolation("verb without a preceding noun");
            VerbSlot v;
            v.index = i;
            v.subject_number = *lexicon.noun_number(s.tokens[owner->subject]);
            v.recent_number = *recent;
            v.main = i == a.main_finite;
            if (family == Family::Reinflection) {
                v.present_sg = lexicon.present_form(leaf.token(), Number::Singular);
                v.present_pl = lexicon.present_form(leaf.token(), Number::Plural);
            }
            a.slots.push_back(std::move(v));
        }
        if (leaf.label().starts_with("N_")) recent = lexicon.noun_number(leaf.token());
    }
    if (std::none_of(a.slots.begin(), a.slots.end(), [](const VerbSlot& v) { return v.main; }))
        throw ContractViolation("main clause predicate does not start with a finite element");
    if (family == Family::Question && !a.first_aux) throw ContractViolation("question sentence without auxiliary");
    s.tree = std::move(tree);
    return s;
}

ParsedSentence sample_sentence(const Grammar& grammar, Family family, Rng& rng) {
    return annotate(grammar.sample(rng), grammar.lexicon(), family, identity_task(family));
}

ParsedSentence sample_sentence(const Grammar& grammar, Family family, Rng& rng, Shape shape) {
    constexpr int kAttempts = 100000;
    for (int i = 0; i < kAttempts; ++i) {
        ParsedSentence s = sample_sentence(grammar, family, rng);
        if (s.ann.shape == shape) return s;
    }
    throw CapacityError("grammar never produced shape " + std::string(to_string(shape)));
}

ParseTree reparse(const Tokens& tokens, const Grammar& grammar) { return grammar.parse_tokens(tokens); }

ParsedSentence reparse_sentence(const Tokens& tokens, const Grammar& grammar, Family family, Token task) {
    return annotate(reparse(tokens, grammar), grammar.lexicon(), family, std::move(task));
}

// ---------------------------------------------------------------------------
// Transforms

std::string_view to_string(TransformRule r) {
    switch (r) {
        case TransformRule::MoveMain:
            return "MOVE_MAIN";
        case TransformRule::MoveFirst:
            return "MOVE_FIRST";
        case TransformRule::AgreeSubject:
            return "AGREE_SUBJECT";
        case TransformRule::AgreeRecent:
            return "AGREE_RECENT";
        case TransformRule::IdentityDecl:
            return "IDENTITY_DECL";
        case TransformRule::IdentityPast:
            return "IDENTITY_PAST";
    }
    return "?";
}

TransformRule rule_from_string(std::string_view s) {
    std::string up(s);
    for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (auto r : {TransformRule::MoveMain, TransformRule::MoveFirst, TransformRule::AgreeSubject,
                   TransformRule::AgreeRecent, TransformRule::IdentityDecl, TransformRule::IdentityPast})
        if (to_string(r) == up) return r;
    throw ConfigError("unknown transform rule '" + std::string(s) + "'");
}

Family rule_family(TransformRule r) {
    switch (r) {
        case TransformRule::MoveMain:
        case TransformRule::MoveFirst:
        case TransformRule::IdentityDecl:
            return Family::Question;
        default:
            return Family::Reinflection;
    }
}

bool is_hierarchical(TransformRule r) { return r == TransformRule::MoveMain || r == TransformRule::AgreeSubject; }

namespace {

void require_family(const ParsedSentence& s, TransformRule rule) {
    if (rule_family(rule) != s.family)
        throw ContractViolation(std::string(to_string(rule)) + " does not apply to a " +
                                std::string(to_string(s.family)) + " sentence");
}

std::size_t moved_index(const ParsedSentence& s, TransformRule rule) {
    if (rule == TransformRule::MoveMain) return s.ann.main_finite;
    if (rule == TransformRule::MoveFirst) {
        if (!s.ann.first_aux) throw ContractViolation("sentence has no auxiliary");
        return *s.ann.first_aux;
    }
    throw ContractViolation(std::string(to_string(rule)) + " moves no auxiliary");
}

Number agreement_number(const VerbSlot& v, TransformRule rule) {
    return rule == TransformRule::AgreeSubject ? v.subject_number : v.recent_number;
}

// Replaces the leaf at in-order position `index`; returns leaves consumed.
std::size_t set_leaf(ParseTree& t, std::size_t index, const Token& token, const std::string& label) {
    if (t.is_leaf()) {
        if (index == 0) {
            t.set_token(token);
            t.set_label(label);
        }
        return 1;
    }
    const std::size_t nl = t.left().leaf_count();
    if (index < nl) return set_leaf(t.left(), index, token, label);
    return set_leaf(t.right(), index - nl, token, label);
}

std::string suffix_of(std::string_view label) {
    const auto p = label.find('_');
    return p == std::string_view::npos ? std::string{} : std::string(label.substr(p));
}

}  // namespace

Tokens apply_transform(const ParsedSentence& s, TransformRule rule) {
    require_family(s, rule);
    switch (rule) {
        case TransformRule::IdentityDecl:
        case TransformRule::IdentityPast:
            return s.tokens;
        case TransformRule::MoveMain:
        case TransformRule::MoveFirst: {
            const std::size_t k = moved_index(s, rule);
            Tokens out;
            out.reserve(s.tokens.size());
            out.push_back(s.tokens[k]);
            for (std::size_t i = 0; i < s.tokens.size(); ++i)
                if (i != k) out.push_back(s.tokens[i]);
            if (out.back() != ".") throw ContractViolation("declarative sentence must end with '.'");
            out.back() = "?";
            return out;
        }
        case TransformRule::AgreeSubject:
        case TransformRule::AgreeRecent: {
            Tokens out = s.tokens;
            for (const auto& v : s.ann.slots)
                out[v.index] = agreement_number(v, rule) == Number::Singular ? v.present_sg : v.present_pl;
            return out;
        }
    }
    throw ContractViolation("unknown transform rule");
}

ParseTree transform_tree(const ParsedSentence& s, TransformRule rule) {
    require_family(s, rule);
    switch (rule) {
        case TransformRule::IdentityDecl:
        case TransformRule::IdentityPast:
            return s.tree;
        case TransformRule::MoveMain:
        case TransformRule::MoveFirst: {
            const ParseTree& root = s.tree;
            if (root.is_leaf() || root.left().category() != "S" || root.right().token() != ".")
                throw ContractViolation("declarative tree must be [S .]");
            const std::size_t k = moved_index(s, rule);
            const ParseTree& aux = *leaf_infos(root)[k].leaf;
            ParseTree clause = remove_leaf(root.left(), k);
            // Labels mirror the question-output grammar: QUEST_x -> SQ_x ?, SQ_x -> AUX SI_x_num.
            const std::string shape = suffix_of(root.label());
            const std::string num = suffix_of(aux.label());
            clause.set_label("SI" + shape + num);
            ParseTree sq = ParseTree::node("SQ" + shape, ParseTree::leaf(aux.token(), aux.label()), std::move(clause));
            return ParseTree::node("QUEST" + shape, std::move(sq), ParseTree::leaf("?", "PUNCT_QUEST"));
        }
        case TransformRule::AgreeSubject:
        case TransformRule::AgreeRecent: {
            ParseTree out = s.tree;
            const auto infos = leaf_infos(s.tree);
            for (const auto& v : s.ann.slots) {
                const Number n = agreement_number(v, rule);
                const std::string& label = infos[v.index].leaf->label();
                const std::string prefix = label.substr(0, label.size() - 5);  // drop "_PAST"
                const std::string new_label =
                    prefix == "AUX" ? (n == Number::Singular ? "AUX_SG" : "AUX_PL")
                                    : prefix + (n == Number::Singular ? "_PRES_SG" : "_PRES_PL");
                set_leaf(out, v.index, n == Number::Singular ? v.present_sg : v.present_pl, new_label);
            }
            return out;
        }
    }
    throw ContractViolation("unknown transform rule");
}

Token oracle_first_word(const ParsedSentence& s, TransformRule rule) {
    if (rule != TransformRule::MoveMain && rule != TransformRule::MoveFirst)
        throw ContractViolation("first-word oracle needs a question rule");
    require_family(s, rule);
    return s.tokens[moved_index(s, rule)];
}

}  // namespace hbias
