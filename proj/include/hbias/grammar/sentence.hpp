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

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hbias/grammar/grammar.hpp"
#include "hbias/grammar/parse_tree.hpp"
#include "hbias/rng.hpp"

namespace hbias {

enum class Family { Question, Reinflection };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

/// The two task tokens of a family: {identity task, transforming task}.
Token identity_task(Family f);
Token transform_task(Family f);

enum class Shape { None, PpOnSubject, PpOnObject, RcOnSubject, RcOnObject };
inline constexpr int kShapeCount = 5;

std::string_view to_string(Shape s);

/// A tense-bearing position: the auxiliary in question sentences, the past
/// verb (or "did") in reinflection sentences.
struct VerbSlot {
    std::size_t index = 0;
    Number subject_number = Number::Singular;  // hierarchical subject
    Number recent_number = Number::Singular;   // linearly closest preceding noun
    bool main = false;
    // Present forms, filled for past slots only.
    Token present_sg;
    Token present_pl;
};

struct Annotations {
    std::size_t main_finite = 0;  // main auxiliary / main verb
    std::optional<std::size_t> first_aux;
    std::size_t subject_head = 0;
    Number subject_number = Number::Singular;
    Shape shape = Shape::None;
    std::vector<VerbSlot> slots;  // linear order

    const VerbSlot& main_slot() const;
};

struct ParsedSentence {
    Tokens tokens;  // sentence incl. punctuation, no task token
    ParseTree tree;
    Token task;
    Family family = Family::Question;
    Annotations ann;

    bool subject_has_rc() const { return ann.shape == Shape::RcOnSubject; }
};

/// Derives role annotations from a labeled tree produced by one of the
/// family grammars. Throws ContractViolation if the tree lacks the labels
/// the annotator relies on (S, NP, RC, PP).
ParsedSentence annotate(ParseTree tree, const Lexicon& lexicon, Family family, Token task);

ParsedSentence sample_sentence(const Grammar& grammar, Family family, Rng& rng);
ParsedSentence sample_sentence(const Grammar& grammar, Family family, Rng& rng, Shape shape);

/// Parse a plain sentence (no task token) and annotate it.
ParsedSentence reparse_sentence(const Tokens& tokens, const Grammar& grammar, Family family, Token task);

ParseTree reparse(const Tokens& tokens, const Grammar& grammar);

enum class TransformRule { MoveMain, MoveFirst, AgreeSubject, AgreeRecent, IdentityDecl, IdentityPast };

std::string_view to_string(TransformRule r);
TransformRule rule_from_string(std::string_view s);
Family rule_family(TransformRule r);
bool is_hierarchical(TransformRule r);

/// Output tokens of `rule` applied to the sentence (task token stripped).
Tokens apply_transform(const ParsedSentence& s, TransformRule rule);

/// Output tree whose leaves equal apply_transform(s, rule).
ParseTree transform_tree(const ParsedSentence& s, TransformRule rule);

/// The auxiliary a question rule moves to the front.
Token oracle_first_word(const ParsedSentence& s, TransformRule rule);

}  // namespace hbias
