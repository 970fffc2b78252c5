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
#include <unordered_map>

#include "hbias/grammar/parse_tree.hpp"

namespace hbias {

/// Token table shared by encoder and decoder (each has its own embedding).
/// Holds every lexicon form, the two bracket tokens and the sequence
/// delimiters.
class Vocab {
public:
    static inline const Token kBos = "<s>";
    static inline const Token kEos = "</s>";

    /// Tokens must be unique and include kBos and kEos; throws ConfigError.
    explicit Vocab(Tokens tokens);
    /// Default lexicon forms (sorted) + brackets + delimiters.
    static Vocab standard();

    int size() const noexcept { return static_cast<int>(tokens_.size()); }
    bool contains(const Token& t) const { return index_.count(t) > 0; }
    /// Throws ContractViolation for an unknown token.
    int index(const Token& t) const;
    const Token& token(int i) const;
    const Tokens& tokens() const noexcept { return tokens_; }
    int bos() const noexcept { return bos_; }
    int eos() const noexcept { return eos_; }

    friend bool operator==(const Vocab& a, const Vocab& b) { return a.tokens_ == b.tokens_; }

private:
    Tokens tokens_;
    std::unordered_map<Token, int> index_;
    int bos_ = -1, eos_ = -1;
};

}  // namespace hbias
