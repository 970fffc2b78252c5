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

#include "hbias/models/vocab.hpp"

#include <algorithm>

#include "hbias/dataset/dataset.hpp"
#include "hbias/errors.hpp"

namespace hbias {

Vocab::Vocab(Tokens tokens) : tokens_(std::move(tokens)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i)
        if (!index_.emplace(tokens_[i], static_cast<int>(i)).second)
            throw ConfigError("duplicate vocabulary token '" + tokens_[i] + "'");
    if (!contains(kBos) || !contains(kEos)) throw ConfigError("vocabulary lacks sequence delimiters");
    bos_ = index_.at(kBos);
    eos_ = index_.at(kEos);
}

Vocab Vocab::standard() {
    Tokens t = Lexicon::parse(default_lexicon_text()).surface_forms();
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    for (const Token& extra : {kOpenBracket, kCloseBracket, kBos, kEos}) t.push_back(extra);
    return Vocab(std::move(t));
}

int Vocab::index(const Token& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) throw ContractViolation("token '" + t + "' is not in the vocabulary");
    return it->second;
}

const Token& Vocab::token(int i) const {
    if (i < 0 || i >= size()) throw ContractViolation("vocabulary index out of range");
    return tokens_[static_cast<std::size_t>(i)];
}

}  // namespace hbias
