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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbias/grammar/grammar.hpp"
#include "hbias/grammar/parse_tree.hpp"
#include "hbias/grammar/sentence.hpp"
#include "hbias/rng.hpp"

namespace hbias {

enum class Split { Train, Val, Test, Gen };
inline constexpr std::array<Split, 4> kAllSplits{Split::Train, Split::Val, Split::Test, Split::Gen};
std::string_view to_string(Split s);

enum class Tag { AmbiguousConsistent, WithheldGeneralization, UnambiguousHierarchical, UnambiguousLinear };
std::string_view to_string(Tag t);
Tag tag_from_string(std::string_view s);

/// Facts about the unbracketed sentence that the metrics need. Positions
/// index the unbracketed output.
struct EvalMeta {
    Token main_aux;   // question: auxiliary MOVE_MAIN fronts
    Token first_aux;  // question: auxiliary MOVE_FIRST fronts
    std::optional<std::size_t> verb_index;  // reinflection: main verb slot
    Token verb_hier;    // present form agreeing with the subject
    Token verb_linear;  // present form agreeing with the most recent noun
    Token verb_sg;
    Token verb_pl;

    friend bool operator==(const EvalMeta&, const EvalMeta&) = default;
};

struct Example {
    Tokens input;   // sentence + task token
    Tokens output;  // never contains a task token
    std::optional<ParseTree> input_tree;   // (INPUT sentence task)
    std::optional<ParseTree> output_tree;
    Family family = Family::Question;
    Tag tag = Tag::AmbiguousConsistent;
    EvalMeta meta;

    const Token& task() const { return input.back(); }
    friend bool operator==(const Example&, const Example&) = default;
};

struct SplitSizes {
    std::size_t train = 100000;
    std::size_t val = 10000;
    std::size_t test = 10000;
    std::size_t gen = 10000;

    std::size_t of(Split s) const;
    friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::uint64_t grammar_hash = 0;
    std::string recipe;
    std::string filters;
    // Rule whose outputs are gold, per family present in the bundle.
    std::map<Family, TransformRule> target_rules;
    SplitSizes sizes;
    bool bracketed = false;
    bool right_branching = false;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct DatasetBundle {
    std::vector<Example> train, val, test, gen;
    Provenance provenance;

    std::vector<Example>& split(Split s);
    const std::vector<Example>& split(Split s) const;
    friend bool operator==(const DatasetBundle&, const DatasetBundle&) = default;
};

// Filter predicates, exposed so they can be checked on hand-built sentences.
bool question_train_eligible(const ParsedSentence& s, const Token& task);
/// RC on subject, auxiliaries differ, auxiliaries agree in number.
bool question_gen_eligible(const ParsedSentence& s);
/// Every verb's most recent noun has its subject's number (trivially true for the identity task).
bool reinflection_train_eligible(const ParsedSentence& s, const Token& task);
/// The main verb's most recent noun disagrees with its subject.
bool reinflection_gen_eligible(const ParsedSentence& s);

/// Builds one example of `s` (task already set) with outputs under `rule`.
Example make_example(const ParsedSentence& s, TransformRule rule, Tag tag);

DatasetBundle build_question_splits(const Grammar& grammar, const SplitSizes& sizes, Rng& rng);
DatasetBundle build_reinflection_splits(const Grammar& grammar, const SplitSizes& sizes, Rng& rng);
DatasetBundle build_unambiguous_splits(const Grammar& grammar, TransformRule rule, const SplitSizes& sizes, Rng& rng);
/// Mixes the question and reinflection tasks 50/50. The ambiguous family is
/// filtered as usual; the other family is trained unambiguously on its
/// hierarchical rule. Generalization holds only the ambiguous family.
DatasetBundle build_multitask(const Grammar& question, const Grammar& reinflection, Family ambiguous,
                              const SplitSizes& sizes, Rng& rng);

inline const Token kOpenBracket = "[";
inline const Token kCloseBracket = "]";

/// Bracket tokens for a tree. Nodes of category S are flattened into their
/// parent so the clause and its punctuation share one bracket.
Tokens bracket_tokens(const ParseTree& tree);
Example bracketize(const Example& e);
Tokens strip_brackets(const Tokens& tokens);

ParseTree right_branching_tree(const Tokens& tokens);
/// Replaces gold trees with right-branching trees over the sentence; the
/// task token stays a top-level sister.
Example right_branch(const Example& e);

/// Recipe grammar: base [+flag ...]. Bases: question, reinflection,
/// unambiguous:<RULE>, multitask:<ambiguous family>. Flags: aux (overt
/// auxiliaries in reinflection), brackets, rightbranch.
struct Recipe {
    enum class Kind { Question, Reinflection, Unambiguous, Multitask };
    Kind kind = Kind::Question;
    TransformRule rule = TransformRule::MoveMain;  // unambiguous
    Family ambiguous = Family::Question;           // multitask
    bool aux = false;
    bool brackets = false;
    bool right_branching = false;

    static Recipe parse(std::string_view text);
    std::string to_string() const;
    /// Families whose examples the bundle contains.
    std::vector<Family> families() const;
};

DatasetBundle build_from_recipe(const Recipe& recipe, const SplitSizes& sizes, std::uint64_t seed);

/// Files: {split}.tsv (input<TAB>output), {split}.trees, {split}.meta,
/// provenance.json.
void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle read_bundle(const std::filesystem::path& dir);

}  // namespace hbias
