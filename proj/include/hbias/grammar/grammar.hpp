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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hbias/grammar/parse_tree.hpp"
#include "hbias/rng.hpp"

namespace hbias {

enum class Number { Singular, Plural };

inline Number opposite(Number n) { return n == Number::Singular ? Number::Plural : Number::Singular; }
std::string_view to_string(Number n);

/// Word lists per lexical category, loaded from `CATEGORY: w1 w2 ...` lines.
///
/// Paradigms are expressed by index alignment between categories:
///   N_SG[k] / N_PL[k] are the two forms of one noun;
///   X_STEM[k], X_PRES_SG[k], X_PRES_PL[k], X_PAST[k] are the four forms of
///   one verb lemma of class X (V_INTR, V_TRANS, ...);
///   AUX_PAST[k] reinflects to AUX_SG[k] / AUX_PL[k].
class Lexicon {
public:
    static Lexicon parse(std::string_view text);
    std::string to_text() const;

    bool has_category(std::string_view category) const;
    /// Throws ContractViolation for an unknown category.
    const Tokens& words(std::string_view category) const;
    std::vector<std::string> category_names() const;

    /// Number of distinct surface forms across all categories.
    std::size_t surface_size() const;
    Tokens surface_forms() const;

    std::optional<Number> noun_number(const Token& t) const;
    bool is_noun(const Token& t) const { return noun_number(t).has_value(); }
    bool is_aux(const Token& t) const;
    bool is_relativizer(const Token& t) const;
    bool is_task(const Token& t) const;
    /// True for any verb form (stem, present, past).
    bool is_verb(const Token& t) const;
    /// True for a past-tense form (verb or auxiliary) that can be reinflected.
    bool is_past(const Token& t) const;

    /// Present-tense form of a past verb or past auxiliary agreeing with
    /// `number`. Throws ContractViolation when `past` has no paradigm.
    Token present_form(const Token& past, Number number) const;

    /// Validates paradigm alignment; throws ConfigError.
    void validate() const;

private:
    std::vector<std::pair<std::string, Tokens>> categories_;
    const Tokens* find(std::string_view category) const;
    Token words_at(std::string_view category, std::size_t k) const;
    bool in_category_with_prefix(const Token& t, std::string_view prefix) const;
};

struct Production {
    std::string lhs;
    std::vector<std::string> rhs;  // one or two symbols
    double weight = 1.0;
};

/// Context-free grammar over lexical categories. Every production is unary
/// or binary; a unary chain collapses in the derived tree and the node keeps
/// the label of the binary production at the bottom of the chain.
class Grammar {
public:
    static constexpr int kDefaultMaxDepth = 32;

    Grammar(Lexicon lexicon, std::vector<Production> productions, std::string start = "ROOT",
            int max_depth = kDefaultMaxDepth);

    /// Parses a rule file (`LHS -> RHS1 RHS2 [weight]`, '#' comments).
    static Grammar parse(std::string_view rules, std::string_view lexicon, std::string start = "ROOT");

    const Lexicon& lexicon() const noexcept { return lexicon_; }
    const std::vector<Production>& productions() const noexcept { return productions_; }
    const std::string& start() const noexcept { return start_; }
    int max_depth() const noexcept { return max_depth_; }

    std::string rules_text() const;
    /// FNV-1a over the rule and lexicon text.
    std::uint64_t hash() const;

    /// Samples a derivation. Depth exhaustion is retried internally.
    ParseTree sample(Rng& rng) const;

    /// CKY parse; throws ParseError when the tokens are not derivable.
    ParseTree parse_tokens(const Tokens& tokens) const;
    bool derivable(const Tokens& tokens) const;

    /// Every derivation from the start symbol whose yield has at most
    /// `max_len` tokens.
    std::vector<ParseTree> enumerate(std::size_t max_len) const;

    struct Compiled;  // symbol tables shared by sampler, parser and enumerator

private:
    Lexicon lexicon_;
    std::vector<Production> productions_;
    std::string start_;
    int max_depth_;
    std::shared_ptr<const Compiled> compiled_;
};

enum class GrammarKind { Question, QuestionOutput, Reinflection, ReinflectionAux };

/// Embedded default lexicon: 75 surface forms.
std::string_view default_lexicon_text();
/// 20-form lexicon used for exhaustive enumeration checks.
std::string_view reduced_lexicon_text();
std::string_view default_rules_text(GrammarKind kind);

Grammar default_grammar(GrammarKind kind);
Grammar reduced_grammar(GrammarKind kind);

}  // namespace hbias
