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

#include "hbias/models/seq2seq.hpp"

#include "hbias/autodiff/checkpoint.hpp"
#include "hbias/errors.hpp"

namespace hbias {

Seq2Seq::Seq2Seq(ModelConfig config, Vocab vocab, std::uint64_t seed)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
    config_.validate();
    Rng rng(seed);
    const int E = config_.embedding, H = config_.hidden, V = vocab_.size();

    enc_emb_ = &params_.add_uniform("enc.emb", E, V, 1, rng);
    if (config_.encoder == Structure::Sequential) {
        enc_cell_ = std::make_unique<Cell>(config_.cell, "enc.cell", E, H, params_, rng, config_.chunk);
    } else {
        // Tree-GRU composition over [left; right].
        comp_W_ = &params_.add_uniform("tenc.W", 4 * H, 2 * H, 2 * H, rng);
        comp_b_ = &params_.add_zeros("tenc.b", 4 * H, 1);
        comp_Wh_ = &params_.add_uniform("tenc.Wh", H, 2 * H, 2 * H, rng);
        comp_bh_ = &params_.add_zeros("tenc.bh", H, 1);
    }

    if (config_.decoder == Structure::Sequential) {
        dec_emb_ = &params_.add_uniform("dec.emb", E, V, 1, rng);
        const int in = E + (config_.attention == Attention::None ? 0 : H);
        dec_cell_ = std::make_unique<Cell>(config_.cell, "dec.cell", in, H, params_, rng, config_.chunk);
        if (config_.attention == Attention::Location) {
            const int fan = H + (config_.location_reads_output ? E : 0);
            loc_W_ = &params_.add_uniform("attn.loc.W", config_.max_positions, fan, fan, rng);
            loc_b_ = &params_.add_zeros("attn.loc.b", config_.max_positions, 1);
        } else if (config_.attention == Attention::Content) {
            att_W1_ = &params_.add_uniform("attn.W1", H, H, H, rng);
            att_W2_ = &params_.add_uniform("attn.W2", H, H, H, rng);
            att_v_ = &params_.add_uniform("attn.v", H, 1, H, rng);
        }
    } else {
        const char* side[2] = {"tdec.L", "tdec.R"};
        for (int k = 0; k < 2; ++k) {
            split_W_[k] = &params_.add_uniform(std::string(side[k]) + ".W", 2 * H, H, H, rng);
            split_b_[k] = &params_.add_zeros(std::string(side[k]) + ".b", 2 * H, 1);
        }
    }
    out_W_ = &params_.add_uniform("dec.out.W", V, H, H, rng);
    out_b_ = &params_.add_zeros("dec.out.b", V, 1);
}

Var Seq2Seq::leaf_embedding(Tape& t, const Token& token) const { return t.embedding(*enc_emb_, vocab_.index(token)); }

Var Seq2Seq::output_logits(Tape& t, Var h) const { return t.affine(t.param(*out_W_), h, t.param(*out_b_)); }

int Seq2Seq::argmax(Tape& t, Var logits) const {
    Eigen::Index best;
    t.value(logits).col(0).maxCoeff(&best);
    return static_cast<int>(best);
}

EncoderOutput Seq2Seq::encode_sequential(Tape& t, const Tokens& tokens) const {
    if (!enc_cell_) throw ContractViolation("model has no sequential encoder");
    EncoderOutput out;
    CellState s = enc_cell_->initial(t);
    for (const Token& tok : tokens) {
        s = enc_cell_->step(t, s, leaf_embedding(t, tok));
        out.states.push_back(s.h);
    }
    out.final = s;
    if (config_.attention != Attention::None && !out.states.empty()) {
        out.memory = t.hstack(out.states);
        if (config_.attention == Attention::Content) out.keys = t.matmul(t.param(*att_W2_), out.memory);
    }
    return out;
}

Var Seq2Seq::compose(Tape& t, Var left, Var right) const {
    const Eigen::Index H = config_.hidden;
    Var pre = t.affine(t.param(*comp_W_), t.concat({left, right}), t.param(*comp_b_));
    Var rl = t.sigmoid(t.slice(pre, 0, H));
    Var rr = t.sigmoid(t.slice(pre, H, H));
    Var z = t.sigmoid(t.slice(pre, 2 * H, H));
    Var w = t.sigmoid(t.slice(pre, 3 * H, H));
    Var cand = t.tanh(t.affine(t.param(*comp_Wh_), t.concat({t.mul(rl, left), t.mul(rr, right)}), t.param(*comp_bh_)));
    // Convex three-way mix of candidate, left child and right child.
    Var carry = t.add(t.mul(w, left), t.mul(t.one_minus(w), right));
    return t.add(t.mul(z, cand), t.mul(t.one_minus(z), carry));
}

Var Seq2Seq::encode_tree(Tape& t, const ParseTree& tree) const {
    if (!comp_W_) throw ContractViolation("model has no tree encoder");
    if (tree.is_leaf()) return leaf_embedding(t, tree.token());
    return compose(t, encode_tree(t, tree.left()), encode_tree(t, tree.right()));
}

EncoderOutput Seq2Seq::encode(Tape& t, const Example& e) const {
    if (config_.encoder == Structure::Sequential) return encode_sequential(t, e.input);
    if (!e.input_tree) throw ContractViolation("tree encoder needs an input tree");
    EncoderOutput out;
    out.final.h = encode_tree(t, *e.input_tree);
    return out;
}

Var Seq2Seq::attention_weights(Tape& t, Var d_prev, Var y_prev, const EncoderOutput& enc) const {
    if (config_.attention == Attention::None) throw ContractViolation("model has no attention");
    const auto n = static_cast<Eigen::Index>(enc.states.size());
    if (n == 0) throw ContractViolation("attention over an empty input");
    if (config_.attention == Attention::Location) {
        if (n > config_.max_positions) throw ContractViolation("input longer than the location scorer's range");
        Var in = config_.location_reads_output ? t.concat({d_prev, y_prev}) : d_prev;
        return t.softmax(t.slice(t.affine(t.param(*loc_W_), in, t.param(*loc_b_)), 0, n));
    }
    Var q = t.matvec(t.param(*att_W1_), d_prev);
    Var scores = t.matvec_t(t.tanh(t.add_col_broadcast(enc.keys, q)), t.param(*att_v_));
    return t.softmax(scores);
}

Var Seq2Seq::attention_context(Tape& t, Var alpha, const EncoderOutput& enc) const {
    return t.matvec(enc.memory, alpha);
}

DecodeTrace Seq2Seq::decode_sequential(Tape& t, const EncoderOutput& enc, const Tokens* gold, Feed feed,
                                       std::size_t max_len) const {
    if (!dec_cell_) throw ContractViolation("model has no sequential decoder");
    DecodeTrace out;
    CellState s = enc.final;
    if (has_cell_state(config_.cell) && !s.c.valid()) s.c = t.zeros(config_.hidden);
    const std::size_t steps = gold ? gold->size() + 1 : max_len;
    int y = vocab_.bos();
    bool ended = false;
    for (std::size_t i = 0; i < steps; ++i) {
        Var emb = t.embedding(*dec_emb_, y);
        Var in = emb;
        if (config_.attention != Attention::None) {
            Var alpha = attention_weights(t, s.h, emb, enc);
            out.alphas.push_back(alpha);
            in = t.concat({emb, attention_context(t, alpha, enc)});
        }
        s = dec_cell_->step(t, s, in);
        Var logits = output_logits(t, s.h);
        out.logits.push_back(logits);
        const int pred = argmax(t, logits);
        if (pred == vocab_.eos()) ended = true;
        if (!ended) out.emitted.push_back(vocab_.token(pred));
        if (!gold) {
            if (ended) return out;
            y = pred;
        } else {
            y = feed == Feed::Own ? pred : (i < gold->size() ? vocab_.index((*gold)[i]) : vocab_.eos());
        }
    }
    if (!gold) out.truncated = true;
    return out;
}

Var Seq2Seq::split(Tape& t, Var parent, bool left) const {
    const int k = left ? 0 : 1;
    const Eigen::Index H = config_.hidden;
    Var pre = t.affine(t.param(*split_W_[k]), parent, t.param(*split_b_[k]));
    Var z = t.sigmoid(t.slice(pre, 0, H));
    Var cand = t.tanh(t.slice(pre, H, H));
    return t.add(t.mul(z, parent), t.mul(t.one_minus(z), cand));
}

void Seq2Seq::decode_subtree(Tape& t, Var v, const ParseTree& node, DecodeTrace& out) const {
    if (node.is_leaf()) {
        Var logits = output_logits(t, v);
        out.logits.push_back(logits);
        out.emitted.push_back(vocab_.token(argmax(t, logits)));
        return;
    }
    decode_subtree(t, split(t, v, true), node.left(), out);
    decode_subtree(t, split(t, v, false), node.right(), out);
}

DecodeTrace Seq2Seq::decode_tree(Tape& t, Var root, const ParseTree& gold) const {
    if (!split_W_[0]) throw ContractViolation("model has no tree decoder");
    DecodeTrace out;
    decode_subtree(t, root, gold, out);
    return out;
}

Seq2Seq::Loss Seq2Seq::loss(Tape& t, const Example& e, Feed feed) const {
    EncoderOutput enc = encode(t, e);
    std::vector<Var> terms;
    if (config_.decoder == Structure::Tree) {
        if (!e.output_tree) throw ContractViolation("tree decoder needs an output tree");
        DecodeTrace tr = decode_tree(t, enc.final.h, *e.output_tree);
        const Tokens gold = e.output_tree->leaves();
        for (std::size_t i = 0; i < gold.size(); ++i)
            terms.push_back(t.softmax_cross_entropy(tr.logits[i], vocab_.index(gold[i])));
    } else {
        DecodeTrace tr = decode_sequential(t, enc, &e.output, feed, 0);
        for (std::size_t i = 0; i <= e.output.size(); ++i) {
            const int target = i < e.output.size() ? vocab_.index(e.output[i]) : vocab_.eos();
            terms.push_back(t.softmax_cross_entropy(tr.logits[i], target));
        }
    }
    return {t.sum(terms), terms.size()};
}

DecodeResult Seq2Seq::predict(const Example& e) const {
    Tape t;
    EncoderOutput enc = encode(t, e);
    DecodeTrace tr;
    if (config_.decoder == Structure::Tree) {
        if (!e.output_tree) throw ContractViolation("tree decoder needs an output tree");
        tr = decode_tree(t, enc.final.h, *e.output_tree);
    } else {
        tr = decode_sequential(t, enc, nullptr, Feed::Own, e.input.size() + kExtraDecodeSteps);
    }
    return {std::move(tr.emitted), tr.truncated};
}

void Seq2Seq::save(const std::filesystem::path& file, nlohmann::json extra) const {
    extra["model"] = config_.to_json();
    extra["vocab"] = vocab_.tokens();
    save_checkpoint(params_, file, extra);
}

std::unique_ptr<Seq2Seq> Seq2Seq::load(const std::filesystem::path& file) {
    const nlohmann::json m = read_manifest(file);
    if (!m.contains("model") || !m.contains("vocab")) throw ParseError("checkpoint manifest lacks model or vocab");
    auto model = std::make_unique<Seq2Seq>(ModelConfig::from_json(m["model"]),
                                           Vocab(m["vocab"].get<Tokens>()), 0);
    load_checkpoint(model->params_, file);
    return model;
}

}  // namespace hbias
