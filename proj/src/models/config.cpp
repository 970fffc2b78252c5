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

#include "hbias/models/config.hpp"

#include "hbias/errors.hpp"

namespace hbias {

std::string_view to_string(Attention a) {
    switch (a) {
        case Attention::None:
            return "NONE";
        case Attention::Location:
            return "LOCATION";
        case Attention::Content:
            return "CONTENT";
    }
    return "?";
}

Attention attention_from_string(std::string_view s) {
    for (auto a : {Attention::None, Attention::Location, Attention::Content})
        if (to_string(a) == s) return a;
    throw ConfigError("unknown attention '" + std::string(s) + "'");
}

std::string_view to_string(Structure s) { return s == Structure::Tree ? "TREE" : "SEQUENTIAL"; }

Structure structure_from_string(std::string_view s) {
    if (s == "TREE") return Structure::Tree;
    if (s == "SEQUENTIAL") return Structure::Sequential;
    throw ConfigError("unknown structure '" + std::string(s) + "'");
}

void ModelConfig::validate() const {
    if (embedding <= 0 || hidden <= 0) throw ConfigError("embedding and hidden sizes must be positive");
    if (max_positions <= 0) throw ConfigError("max_positions must be positive");
    if (attention != Attention::None && encoder != Structure::Sequential)
        throw ConfigError("attention requires a sequential encoder");
    if (encoder == Structure::Tree && embedding != hidden)
        throw ConfigError("a tree encoder needs embedding size == hidden size");
    if (cell == CellKind::ONLSTM && (chunk <= 0 || hidden % chunk != 0))
        throw ConfigError("ON-LSTM hidden size must be divisible by the chunk factor");
}

std::string ModelConfig::label() const {
    if (encoder == Structure::Tree && decoder == Structure::Tree) return "Tree/Tree";
    if (encoder == Structure::Tree) return "Tree/Seq(" + std::string(to_string(cell)) + ")";
    if (decoder == Structure::Tree) return "Seq(" + std::string(to_string(cell)) + ")/Tree";
    return std::string(to_string(cell)) + "/" + std::string(to_string(attention));
}

nlohmann::json ModelConfig::to_json() const {
    return {{"cell", to_string(cell)},
            {"attention", to_string(attention)},
            {"encoder", to_string(encoder)},
            {"decoder", to_string(decoder)},
            {"embedding", embedding},
            {"hidden", hidden},
            {"chunk", chunk},
            {"location_reads_output", location_reads_output},
            {"max_positions", max_positions}};
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
    ModelConfig c;
    try {
        if (!j.is_object()) throw ConfigError("model config must be a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "cell")
                c.cell = cell_kind_from_string(it->get<std::string>());
            else if (k == "attention")
                c.attention = attention_from_string(it->get<std::string>());
            else if (k == "encoder")
                c.encoder = structure_from_string(it->get<std::string>());
            else if (k == "decoder")
                c.decoder = structure_from_string(it->get<std::string>());
            else if (k == "embedding")
                c.embedding = it->get<int>();
            else if (k == "hidden")
                c.hidden = it->get<int>();
            else if (k == "chunk")
                c.chunk = it->get<int>();
            else if (k == "location_reads_output")
                c.location_reads_output = it->get<bool>();
            else if (k == "max_positions")
                c.max_positions = it->get<int>();
            else
                throw ConfigError("unknown model config key '" + k + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad model config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace hbias
