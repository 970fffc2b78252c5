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

#include "hbias/cells/cell.hpp"
#include "json.hpp"

namespace hbias {

enum class Attention { None, Location, Content };
enum class Structure { Sequential, Tree };

std::string_view to_string(Attention a);
Attention attention_from_string(std::string_view s);
std::string_view to_string(Structure s);
Structure structure_from_string(std::string_view s);

struct ModelConfig {
    CellKind cell = CellKind::GRU;
    Attention attention = Attention::None;
    Structure encoder = Structure::Sequential;
    Structure decoder = Structure::Sequential;
    int embedding = 256;
    int hidden = 256;
    int chunk = 8;  // ON-LSTM only
    // LOCATION scorer reads y_{i-1} as well as D_{i-1}.
    bool location_reads_output = true;
    // Longest input the LOCATION scorer can address.
    int max_positions = 64;

    /// Throws ConfigError: attention needs a sequential encoder, a tree
    /// encoder needs embedding == hidden, sizes positive.
    void validate() const;
    bool needs_input_tree() const { return encoder == Structure::Tree; }
    bool needs_output_tree() const { return decoder == Structure::Tree; }
    /// Short display name, e.g. "GRU/CONTENT" or "Tree/Seq(GRU)".
    std::string label() const;

    nlohmann::json to_json() const;
    static ModelConfig from_json(const nlohmann::json& j);

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace hbias
