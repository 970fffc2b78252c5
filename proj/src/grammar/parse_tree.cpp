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

#include "hbias/grammar/parse_tree.hpp"

#include <algorithm>
#include <cctype>

#include "hbias/errors.hpp"

namespace hbias {

ParseTree ParseTree::leaf(Token token, std::string label) {
    if (token.empty()) throw ContractViolation("parse tree leaf needs a token");
    ParseTree t;
    t.token_ = std::move(token);
    t.label_ = std::move(label);
    return t;
}

ParseTree ParseTree::node(std::string label, ParseTree left, ParseTree right) {
    ParseTree t;
    t.label_ = std::move(label);
    t.children_.reserve(2);
    t.children_.push_back(std::move(left));
    t.children_.push_back(std::move(right));
    return t;
}

const ParseTree& ParseTree::left() const {
    if (is_leaf()) throw ContractViolation("leaf has no children");
    return children_[0];
}
const ParseTree& ParseTree::right() const {
    if (is_leaf()) throw ContractViolation("leaf has no children");
    return children_[1];
}
ParseTree& ParseTree::left() {
    if (is_leaf()) throw ContractViolation("leaf has no children");
    return children_[0];
}
ParseTree& ParseTree::right() {
    if (is_leaf()) throw ContractViolation("leaf has no children");
    return children_[1];
}

std::string_view ParseTree::category() const noexcept {
    std::string_view l = label_;
    return l.substr(0, l.find('_'));
}

std::size_t ParseTree::leaf_count() const noexcept {
    if (is_leaf()) return 1;
    return children_[0].leaf_count() + children_[1].leaf_count();
}

std::size_t ParseTree::depth() const noexcept {
    if (is_leaf()) return 0;
    return 1 + std::max(children_[0].depth(), children_[1].depth());
}

void ParseTree::collect_leaves(Tokens& out) const {
    if (is_leaf()) {
        out.push_back(token_);
        return;
    }
    children_[0].collect_leaves(out);
    children_[1].collect_leaves(out);
}

Tokens ParseTree::leaves() const {
    Tokens out;
    collect_leaves(out);
    return out;
}

namespace {

void write(const ParseTree& t, std::string& out) {
    if (t.is_leaf()) {
        if (t.label().empty()) {
            out += t.token();
        } else {
            out += '(';
            out += t.label();
            out += ' ';
            out += t.token();
            out += ')';
        }
        return;
    }
    out += '(';
    out += t.label().empty() ? "_" : t.label();
    out += ' ';
    write(t.left(), out);
    out += ' ';
    write(t.right(), out);
    out += ')';
}

class TreeReader {
public:
    explicit TreeReader(std::string_view text) : text_(text) {}

    ParseTree read_all() {
        ParseTree t = read();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
        return t;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("bad tree at offset " + std::to_string(pos_) + ": " + why);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string atom() {
        skip_space();
        const std::size_t begin = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
               text_[pos_] != ')')
            ++pos_;
        if (begin == pos_) fail("expected a symbol");
        return std::string(text_.substr(begin, pos_ - begin));
    }

    ParseTree read() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end");
        if (text_[pos_] != '(') return ParseTree::leaf(atom());
        ++pos_;
        std::string label = atom();
        skip_space();
        std::vector<ParseTree> kids;
        while (pos_ < text_.size() && text_[pos_] != ')') {
            kids.push_back(read());
            skip_space();
        }
        if (pos_ >= text_.size()) fail("missing ')'");
        ++pos_;
        if (kids.size() == 1 && kids[0].is_leaf() && kids[0].label().empty())
            return ParseTree::leaf(kids[0].token(), label);
        if (kids.size() != 2) fail("internal node must have exactly two children");
        return ParseTree::node(label == "_" ? std::string{} : label, std::move(kids[0]), std::move(kids[1]));
    }
};

void gather(const ParseTree& t, std::size_t depth, std::vector<LeafInfo>& out) {
    if (t.is_leaf()) {
        out.push_back({&t, depth});
        return;
    }
    gather(t.left(), depth + 1, out);
    gather(t.right(), depth + 1, out);
}

ParseTree remove_at(const ParseTree& t, std::size_t& index) {
    // index counts down leaves still to skip; caller guarantees t is internal.
    const std::size_t nl = t.left().leaf_count();
    if (index < nl) {
        if (t.left().is_leaf()) return t.right();
        return ParseTree::node(t.label(), remove_at(t.left(), index), t.right());
    }
    index -= nl;
    if (t.right().is_leaf()) return t.left();
    return ParseTree::node(t.label(), t.left(), remove_at(t.right(), index));
}

}  // namespace

std::string ParseTree::to_string() const {
    std::string out;
    write(*this, out);
    return out;
}

ParseTree ParseTree::parse(std::string_view text) { return TreeReader(text).read_all(); }

std::vector<LeafInfo> leaf_infos(const ParseTree& tree) {
    std::vector<LeafInfo> out;
    gather(tree, 0, out);
    return out;
}

ParseTree remove_leaf(const ParseTree& tree, std::size_t index) {
    if (tree.is_leaf()) throw ContractViolation("cannot remove the only leaf of a tree");
    if (index >= tree.leaf_count()) throw ContractViolation("leaf index out of range");
    std::size_t i = index;
    return remove_at(tree, i);
}

std::string join_tokens(const Tokens& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

Tokens split_tokens(std::string_view text) {
    Tokens out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t b = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > b) out.emplace_back(text.substr(b, i - b));
    }
    return out;
}

}  // namespace hbias
