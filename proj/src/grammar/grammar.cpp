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

#include "hbias/grammar/grammar.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <unordered_map>

#include "hbias/errors.hpp"

namespace hbias {

std::string_view to_string(Number n) { return n == Number::Singular ? "sg" : "pl"; }

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t b = 0;
    while (b <= text.size()) {
        std::size_t e = text.find('\n', b);
        if (e == std::string_view::npos) e = text.size();
        out.push_back(text.substr(b, e - b));
        b = e + 1;
    }
    return out;
}

std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<double> parse_weight(std::string_view tok) {
    if (tok.size() >= 2 && tok.front() == '[' && tok.back() == ']') tok = tok.substr(1, tok.size() - 2);
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lexicon

Lexicon Lexicon::parse(std::string_view text) {
    Lexicon lex;
    std::size_t lineno = 0;
    for (std::string_view raw : lines_of(text)) {
        ++lineno;
        std::string_view line = strip_comment(raw);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("lexicon line needs 'CATEGORY: words'", lineno);
        std::string name(trim(line.substr(0, colon)));
        if (name.empty()) throw ParseError("empty lexicon category", lineno);
        if (lex.find(name)) throw ParseError("duplicate lexicon category " + name, lineno);
        Tokens words = split_tokens(line.substr(colon + 1));
        lex.categories_.emplace_back(std::move(name), std::move(words));
    }
    lex.validate();
    return lex;
}

std::string Lexicon::to_text() const {
    std::string out;
    for (const auto& [name, words] : categories_) {
        out += name;
        out += ':';
        for (const auto& w : words) {
            out += ' ';
            out += w;
        }
        out += '\n';
    }
    return out;
}

const Tokens* Lexicon::find(std::string_view category) const {
    for (const auto& [name, words] : categories_)
        if (name == category) return &words;
    return nullptr;
}

bool Lexicon::has_category(std::string_view category) const { return find(category) != nullptr; }

const Tokens& Lexicon::words(std::string_view category) const {
    const Tokens* w = find(category);
    if (!w) throw ContractViolation("unknown lexical category " + std::string(category));
    return *w;
}

std::vector<std::string> Lexicon::category_names() const {
    std::vector<std::string> out;
    for (const auto& c : categories_) out.push_back(c.first);
    return out;
}

Tokens Lexicon::surface_forms() const {
    std::set<Token> seen;
    Tokens out;
    for (const auto& c : categories_)
        for (const auto& w : c.second)
            if (seen.insert(w).second) out.push_back(w);
    return out;
}

std::size_t Lexicon::surface_size() const { return surface_forms().size(); }

bool Lexicon::in_category_with_prefix(const Token& t, std::string_view prefix) const {
    for (const auto& [name, words] : categories_) {
        if (std::string_view(name).substr(0, prefix.size()) != prefix) continue;
        if (std::find(words.begin(), words.end(), t) != words.end()) return true;
    }
    return false;
}

std::optional<Number> Lexicon::noun_number(const Token& t) const {
    if (const Tokens* sg = find("N_SG"); sg && std::find(sg->begin(), sg->end(), t) != sg->end())
        return Number::Singular;
    if (const Tokens* pl = find("N_PL"); pl && std::find(pl->begin(), pl->end(), t) != pl->end())
        return Number::Plural;
    return std::nullopt;
}

bool Lexicon::is_aux(const Token& t) const { return in_category_with_prefix(t, "AUX_"); }
bool Lexicon::is_relativizer(const Token& t) const { return in_category_with_prefix(t, "REL"); }
bool Lexicon::is_task(const Token& t) const { return in_category_with_prefix(t, "TASK"); }
bool Lexicon::is_verb(const Token& t) const { return in_category_with_prefix(t, "V_"); }

bool Lexicon::is_past(const Token& t) const {
    for (const auto& [name, words] : categories_)
        if (ends_with(name, "_PAST") && std::find(words.begin(), words.end(), t) != words.end()) return true;
    return false;
}

Token Lexicon::present_form(const Token& past, Number number) const {
    for (const auto& [name, words] : categories_) {
        if (!ends_with(name, "_PAST")) continue;
        const auto it = std::find(words.begin(), words.end(), past);
        if (it == words.end()) continue;
        const auto k = static_cast<std::size_t>(it - words.begin());
        const std::string prefix = name.substr(0, name.size() - 5);
        const std::string target =
            prefix == "AUX" ? (number == Number::Singular ? "AUX_SG" : "AUX_PL")
                            : prefix + (number == Number::Singular ? "_PRES_SG" : "_PRES_PL");
        return words_at(target, k);
    }
    throw ContractViolation("'" + past + "' has no past-tense paradigm");
}

Token Lexicon::words_at(std::string_view category, std::size_t k) const {
    const Tokens& w = words(category);
    if (k >= w.size()) throw ContractViolation("paradigm slot missing in " + std::string(category));
    return w[k];
}

void Lexicon::validate() const {
    auto need_len = [&](std::string_view cat, std::size_t n, bool at_least) {
        const Tokens* w = find(cat);
        if (!w) throw ConfigError("lexicon lacks paradigm category " + std::string(cat));
        if (at_least ? w->size() < n : w->size() != n)
            throw ConfigError("paradigm category " + std::string(cat) + " is misaligned");
    };
    if (const Tokens* sg = find("N_SG")) {
        need_len("N_PL", sg->size(), false);
        std::set<Token> seen;
        for (const auto& w : *sg)
            if (!seen.insert(w).second) throw ConfigError("duplicate noun " + w);
        for (const auto& w : words("N_PL"))
            if (!seen.insert(w).second) throw ConfigError("noun form " + w + " is both singular and plural");
    }
    for (const auto& [name, words_] : categories_) {
        if (!ends_with(name, "_PAST")) continue;
        const std::string prefix = name.substr(0, name.size() - 5);
        if (prefix == "AUX") {
            need_len("AUX_SG", words_.size(), true);
            need_len("AUX_PL", words_.size(), true);
        } else {
            need_len(prefix + "_PRES_SG", words_.size(), false);
            need_len(prefix + "_PRES_PL", words_.size(), false);
            need_len(prefix + "_STEM", words_.size(), false);
        }
    }
}

// ---------------------------------------------------------------------------
// Grammar

struct Grammar::Compiled {
    struct Symbol {
        std::string name;
        bool lexical = false;
        Tokens words;  // copied so the tables survive Grammar copies
        std::vector<int> productions;  // into Grammar::productions_
        std::vector<double> weights;
    };
    struct Binary {
        int lhs;
        int left;
        int right;
    };
    struct Unary {
        int lhs;
        int child;
    };
    std::vector<Symbol> symbols;
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> prod_rhs;  // symbol ids per production
    std::vector<Binary> binaries;
    std::vector<Unary> unaries;
    std::unordered_map<Token, std::vector<int>> lexical_of;  // token -> lexical symbols
    int start = -1;
};

namespace {

struct DepthExhausted {};

}  // namespace

Grammar::Grammar(Lexicon lexicon, std::vector<Production> productions, std::string start, int max_depth)
    : lexicon_(std::move(lexicon)),
      productions_(std::move(productions)),
      start_(std::move(start)),
      max_depth_(max_depth) {
    auto c = std::make_shared<Compiled>();
    auto intern = [&](const std::string& name) {
        auto it = c->index.find(name);
        if (it != c->index.end()) return it->second;
        const int id = static_cast<int>(c->symbols.size());
        Compiled::Symbol sym;
        sym.name = name;
        c->symbols.push_back(std::move(sym));
        c->index.emplace(name, id);
        return id;
    };
    for (const auto& p : productions_) {
        if (p.rhs.empty() || p.rhs.size() > 2)
            throw ConfigError("production for " + p.lhs + " must be unary or binary");
        if (!(p.weight > 0.0)) throw ConfigError("production for " + p.lhs + " needs a positive weight");
        if (lexicon_.has_category(p.lhs)) throw ConfigError(p.lhs + " is both a lexical category and a nonterminal");
        intern(p.lhs);
    }
    for (std::size_t i = 0; i < productions_.size(); ++i) {
        const auto& p = productions_[i];
        std::vector<int> rhs;
        for (const auto& s : p.rhs) {
            if (!c->index.count(s)) {
                if (!lexicon_.has_category(s)) throw ConfigError("undefined grammar symbol " + s);
                const int id = intern(s);
                c->symbols[id].lexical = true;
                c->symbols[id].words = lexicon_.words(s);
                if (c->symbols[id].words.empty()) throw ConfigError("lexical category " + s + " is empty");
            }
            rhs.push_back(c->index.at(s));
        }
        const int lhs = c->index.at(p.lhs);
        c->symbols[lhs].productions.push_back(static_cast<int>(i));
        c->symbols[lhs].weights.push_back(p.weight);
        if (rhs.size() == 1)
            c->unaries.push_back({lhs, rhs[0]});
        else
            c->binaries.push_back({lhs, rhs[0], rhs[1]});
        c->prod_rhs.push_back(std::move(rhs));
    }
    auto st = c->index.find(start_);
    if (st == c->index.end() || c->symbols[st->second].lexical)
        throw ConfigError("start symbol " + start_ + " has no productions");
    c->start = st->second;
    for (int id = 0; id < static_cast<int>(c->symbols.size()); ++id) {
        const auto& sym = c->symbols[id];
        if (!sym.lexical) continue;
        for (const auto& w : sym.words) {
            auto& v = c->lexical_of[w];
            if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
        }
    }
    // Unary cycles would make both sampling and CKY closure ill-defined.
    const int n = static_cast<int>(c->symbols.size());
    std::vector<std::vector<int>> reach(n);
    for (const auto& u : c->unaries) reach[u.lhs].push_back(u.child);
    for (int s = 0; s < n; ++s) {
        std::vector<int> stack = reach[s];
        std::vector<char> seen(n, 0);
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            if (x == s) throw ConfigError("unary cycle through " + c->symbols[s].name);
            if (seen[x]) continue;
            seen[x] = 1;
            for (int y : reach[x]) stack.push_back(y);
        }
    }
    compiled_ = std::move(c);
}

Grammar Grammar::parse(std::string_view rules, std::string_view lexicon, std::string start) {
    std::vector<Production> prods;
    std::size_t lineno = 0;
    for (std::string_view raw : lines_of(rules)) {
        ++lineno;
        std::string_view line = strip_comment(raw);
        if (line.empty()) continue;
        Tokens toks = split_tokens(line);
        if (toks.size() < 3 || toks[1] != "->") throw ParseError("rule must read 'LHS -> RHS [weight]'", lineno);
        Production p;
        p.lhs = toks[0];
        std::vector<std::string> rhs(toks.begin() + 2, toks.end());
        if (rhs.size() >= 2) {
            if (auto w = parse_weight(rhs.back())) {
                p.weight = *w;
                rhs.pop_back();
            }
        }
        if (rhs.empty() || rhs.size() > 2) throw ParseError("rule for " + p.lhs + " must be unary or binary", lineno);
        p.rhs = std::move(rhs);
        prods.push_back(std::move(p));
    }
    return Grammar(Lexicon::parse(lexicon), std::move(prods), std::move(start));
}

std::string Grammar::rules_text() const {
    std::string out;
    for (const auto& p : productions_) {
        out += p.lhs;
        out += " ->";
        for (const auto& s : p.rhs) {
            out += ' ';
            out += s;
        }
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p.weight);
        out += " [";
        out.append(buf, ptr);
        out += "]\n";
    }
    return out;
}

std::uint64_t Grammar::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    mix(start_);
    mix("\n");
    mix(rules_text());
    mix("\n--\n");
    mix(lexicon_.to_text());
    return h;
}

namespace {

ParseTree expand(const Grammar::Compiled& c, const std::vector<Production>& prods, int sym, int depth,
                 int max_depth, Rng& rng);

}  // namespace

ParseTree Grammar::sample(Rng& rng) const {
    constexpr int kAttempts = 10000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        try {
            return expand(*compiled_, productions_, compiled_->start, 0, max_depth_, rng);
        } catch (const DepthExhausted&) {
        }
    }
    throw ConfigError("grammar derivations keep exceeding the maximum depth");
}

namespace {

ParseTree expand(const Grammar::Compiled& c, const std::vector<Production>& prods, int sym, int depth,
                 int max_depth, Rng& rng) {
    if (depth > max_depth) throw DepthExhausted{};
    const auto& s = c.symbols[sym];
    if (s.lexical) return ParseTree::leaf(s.words[rng.below(s.words.size())], s.name);
    const int pi = s.productions[rng.weighted(s.weights)];
    const auto& rhs = c.prod_rhs[pi];
    if (rhs.size() == 1) return expand(c, prods, rhs[0], depth + 1, max_depth, rng);
    ParseTree l = expand(c, prods, rhs[0], depth + 1, max_depth, rng);
    ParseTree r = expand(c, prods, rhs[1], depth + 1, max_depth, rng);
    return ParseTree::node(prods[pi].lhs, std::move(l), std::move(r));
}

struct Cell {
    // per symbol: kind 0 = absent, 1 = lexical, 2 = unary, 3 = binary
    std::vector<std::int8_t> kind;
    std::vector<int> a;  // unary child / binary split
    std::vector<int> b;  // binary left symbol
    std::vector<int> d;  // binary right symbol
    explicit Cell(std::size_t n) : kind(n, 0), a(n, -1), b(n, -1), d(n, -1) {}
};

}  // namespace

ParseTree Grammar::parse_tokens(const Tokens& tokens) const {
    const auto& c = *compiled_;
    const std::size_t n = tokens.size();
    if (n == 0) throw ParseError("cannot parse an empty token sequence");
    const std::size_t ns = c.symbols.size();
    // chart[i * (n + 1) + j] covers tokens [i, j)
    std::vector<Cell> chart;
    chart.reserve(n * (n + 1));
    for (std::size_t i = 0; i < n * (n + 1); ++i) chart.emplace_back(ns);
    auto at = [&](std::size_t i, std::size_t j) -> Cell& { return chart[i * (n + 1) + j]; };

    auto close_unary = [&](Cell& cell) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& u : c.unaries) {
                if (cell.kind[u.child] && !cell.kind[u.lhs]) {
                    cell.kind[u.lhs] = 2;
                    cell.a[u.lhs] = u.child;
                    changed = true;
                }
            }
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        Cell& cell = at(i, i + 1);
        auto it = c.lexical_of.find(tokens[i]);
        if (it == c.lexical_of.end()) throw ParseError("token '" + tokens[i] + "' is not in the grammar's lexicon");
        for (int sym : it->second) cell.kind[sym] = 1;
        close_unary(cell);
    }
    for (std::size_t len = 2; len <= n; ++len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::size_t j = i + len;
            Cell& cell = at(i, j);
            for (std::size_t k = i + 1; k < j; ++k) {
                const Cell& L = at(i, k);
                const Cell& R = at(k, j);
                for (const auto& bin : c.binaries) {
                    if (cell.kind[bin.lhs] || !L.kind[bin.left] || !R.kind[bin.right]) continue;
                    cell.kind[bin.lhs] = 3;
                    cell.a[bin.lhs] = static_cast<int>(k);
                    cell.b[bin.lhs] = bin.left;
                    cell.d[bin.lhs] = bin.right;
                }
            }
            close_unary(cell);
        }
    }
    if (!at(0, n).kind[c.start]) throw ParseError("sequence is not derivable: " + join_tokens(tokens));

    auto build = [&](auto&& self, std::size_t i, std::size_t j, int sym) -> ParseTree {
        const Cell& cell = at(i, j);
        switch (cell.kind[sym]) {
            case 1:
                return ParseTree::leaf(tokens[i], c.symbols[sym].name);
            case 2:
                return self(self, i, j, cell.a[sym]);
            case 3: {
                const auto k = static_cast<std::size_t>(cell.a[sym]);
                return ParseTree::node(c.symbols[sym].name, self(self, i, k, cell.b[sym]),
                                       self(self, k, j, cell.d[sym]));
            }
            default:
                throw ParseError("internal chart inconsistency");
        }
    };
    return build(build, 0, n, c.start);
}

bool Grammar::derivable(const Tokens& tokens) const {
    try {
        parse_tokens(tokens);
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

std::vector<ParseTree> Grammar::enumerate(std::size_t max_len) const {
    const auto& c = *compiled_;
    // memo[(sym, budget)] = trees of sym with yield length <= budget
    std::map<std::pair<int, std::size_t>, std::vector<ParseTree>> memo;
    auto gen = [&](auto&& self, int sym, std::size_t budget) -> const std::vector<ParseTree>& {
        auto key = std::make_pair(sym, budget);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<ParseTree> out;
        const auto& s = c.symbols[sym];
        if (budget >= 1) {
            if (s.lexical) {
                for (const auto& w : s.words) out.push_back(ParseTree::leaf(w, s.name));
            } else {
                for (int pi : s.productions) {
                    const auto& rhs = c.prod_rhs[pi];
                    if (rhs.size() == 1) {
                        const auto& kids = self(self, rhs[0], budget);
                        out.insert(out.end(), kids.begin(), kids.end());
                        continue;
                    }
                    if (budget < 2) continue;
                    const std::vector<ParseTree> lefts = self(self, rhs[0], budget - 1);
                    for (const auto& l : lefts) {
                        const std::size_t ll = l.leaf_count();
                        const std::vector<ParseTree> rights = self(self, rhs[1], budget - ll);
                        for (const auto& r : rights) out.push_back(ParseTree::node(productions_[pi].lhs, l, r));
                    }
                }
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    };
    return gen(gen, c.start, max_len);
}

}  // namespace hbias
