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
#include <filesystem>
#include <memory>
#include <vector>

#include "hbias/autodiff/tape.hpp"
#include "hbias/cells/cell.hpp"
#include "hbias/dataset/dataset.hpp"
#include "hbias/models/config.hpp"
#include "hbias/models/vocab.hpp"

namespace hbias {

struct EncoderOutput {
    CellState final;
    // E_1..E_n, one per input token (sequential encoders only).
    std::vector<Var> states;
    // Attention memory: states as columns, and W2 * memory for CONTENT.
    Var memory;
    Var keys;
};

/// What one decoder pass produced. Vars live on the tape passed in.
struct DecodeTrace {
    std::vector<Var> logits;  // one per emitted position
    std::vector<Var> alphas;  // attention weights per step (empty for NONE)
    Tokens emitted;           // argmax tokens, end-of-sequence excluded
    bool truncated = false;   // free running hit max_len
};

struct DecodeResult {
    Tokens tokens;
    bool truncated = false;
};

/// Encoder-decoder over one vocabulary. Forward passes are const and
/// thread-safe; backward writes into the parameter gradients.
class Seq2Seq {
public:
    // Output may exceed the input by the moved token plus punctuation.
    static constexpr std::size_t kExtraDecodeSteps = 10;

    Seq2Seq(ModelConfig config, Vocab vocab, std::uint64_t seed);
    Seq2Seq(const Seq2Seq&) = delete;
    Seq2Seq& operator=(const Seq2Seq&) = delete;

    const ModelConfig& config() const noexcept { return config_; }
    const Vocab& vocab() const noexcept { return vocab_; }
    ParameterSet& params() noexcept { return params_; }
    const ParameterSet& params() const noexcept { return params_; }

    EncoderOutput encode_sequential(Tape& t, const Tokens& tokens) const;
    /// Root vector of a binary tree; leaves are word embeddings.
    Var encode_tree(Tape& t, const ParseTree& tree) const;
    /// Dispatches on the configured encoder; throws ContractViolation when a
    /// tree is required but absent.
    EncoderOutput encode(Tape& t, const Example& e) const;

    /// Softmax weights over E_1..E_n given D_{i-1} and y_{i-1}'s embedding.
    Var attention_weights(Tape& t, Var d_prev, Var y_prev, const EncoderOutput& enc) const;
    /// sum_j alpha[j] E_j
    Var attention_context(Tape& t, Var alpha, const EncoderOutput& enc) const;

    enum class Feed { Gold, Own };
    /// With `gold`, runs gold.size() + 1 steps (last target is end of
    /// sequence) feeding either gold or own predictions. Without, runs free
    /// until end of sequence or max_len steps.
    DecodeTrace decode_sequential(Tape& t, const EncoderOutput& enc, const Tokens* gold, Feed feed,
                                  std::size_t max_len) const;
    /// Top-down over the gold output topology; one logit vector per leaf.
    DecodeTrace decode_tree(Tape& t, Var root, const ParseTree& gold) const;

    struct Loss {
        Var total;  // summed token cross-entropy
        std::size_t tokens = 0;
    };
    Loss loss(Tape& t, const Example& e, Feed feed) const;

    DecodeResult predict(const Example& e) const;

    /// Binary parameters at `file`, config and vocabulary in the manifest.
    void save(const std::filesystem::path& file, nlohmann::json extra = nlohmann::json::object()) const;
    static std::unique_ptr<Seq2Seq> load(const std::filesystem::path& file);

private:
    ModelConfig config_;
    Vocab vocab_;
    ParameterSet params_;
    std::unique_ptr<Cell> enc_cell_, dec_cell_;
    // Cached parameter handles; null when the configuration has no use.
    Parameter *enc_emb_ = nullptr, *dec_emb_ = nullptr, *out_W_ = nullptr, *out_b_ = nullptr;
    Parameter *loc_W_ = nullptr, *loc_b_ = nullptr, *att_W1_ = nullptr, *att_W2_ = nullptr, *att_v_ = nullptr;
    Parameter *comp_W_ = nullptr, *comp_b_ = nullptr, *comp_Wh_ = nullptr, *comp_bh_ = nullptr;
    Parameter *split_W_[2] = {nullptr, nullptr}, *split_b_[2] = {nullptr, nullptr};

    Var leaf_embedding(Tape& t, const Token& token) const;
    Var output_logits(Tape& t, Var h) const;
    Var compose(Tape& t, Var left, Var right) const;
    Var split(Tape& t, Var parent, bool left) const;
    void decode_subtree(Tape& t, Var v, const ParseTree& node, DecodeTrace& out) const;
    int argmax(Tape& t, Var logits) const;
};

}  // namespace hbias
