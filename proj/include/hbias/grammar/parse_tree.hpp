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

#include <string>
#include <string_view>
#include <vector>

namespace hbias {

using Token = std::string;
using Tokens = std::vector<Token>;

/// Strictly binary parse tree. A leaf carries a token and its lexical
/// category; an internal node carries a nonterminal label and exactly two
/// children.
class ParseTree {
public:
    ParseTree() = default;

    static ParseTree leaf(Token token, std::string label = {});
    static ParseTree node(std::string label, ParseTree left, ParseTree right);

    bool is_leaf() const noexcept { return children_.empty(); }
    const std::string& label() const noexcept { return label_; }
    const Token& token() const noexcept { return token_; }
    const ParseTree& left() const;
    const ParseTree& right() const;
    ParseTree& left();
    ParseTree& right();

    void set_label(std::string label) { label_ = std::move(label); }
    void set_token(Token token) { token_ = std::move(token); }

    /// Label text before the first '_' ("NP_PP_SG" -> "NP").
    std::string_view category() const noexcept;

    std::size_t leaf_count() const noexcept;
    std::size_t depth() const noexcept;
    Tokens leaves() const;
    void collect_leaves(Tokens& out) const;

    /// Labeled bracket notation: internal "(LABEL left right)", leaf
    /// "(LABEL token)" or bare "token" when unlabeled.
    std::string to_string() const;
    static ParseTree parse(std::string_view text);

    friend bool operator==(const ParseTree&, const ParseTree&) = default;

private:
    std::string label_;
    Token token_;
    std::vector<ParseTree> children_;
};

/// Leaf position of each leaf in in-order traversal paired with its depth
/// (root depth 0).
struct LeafInfo {
    const ParseTree* leaf;
    std::size_t depth;
};
std::vector<LeafInfo> leaf_infos(const ParseTree& tree);

/// Removes the leaf at in-order position `index`; its parent is replaced by
/// the remaining sibling. The tree must have at least two leaves.
ParseTree remove_leaf(const ParseTree& tree, std::size_t index);

std::string join_tokens(const Tokens& tokens);
Tokens split_tokens(std::string_view text);

}  // namespace hbias
