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

#include "hbias/cells/cell.hpp"

#include "hbias/errors.hpp"

namespace hbias {

std::string_view to_string(CellKind k) {
    switch (k) {
        case CellKind::SRN:
            return "SRN";
        case CellKind::GRU:
            return "GRU";
        case CellKind::LSTM:
            return "LSTM";
        case CellKind::SquashedLSTM:
            return "SQUASHED_LSTM";
        case CellKind::UnsquashedGRU:
            return "UNSQUASHED_GRU";
        case CellKind::ONLSTM:
            return "ON_LSTM";
    }
    return "?";
}

CellKind cell_kind_from_string(std::string_view s) {
    for (auto k : {CellKind::SRN, CellKind::GRU, CellKind::LSTM, CellKind::SquashedLSTM, CellKind::UnsquashedGRU,
                   CellKind::ONLSTM})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown cell kind '" + std::string(s) + "'");
}

bool has_cell_state(CellKind k) {
    return k == CellKind::LSTM || k == CellKind::SquashedLSTM || k == CellKind::ONLSTM;
}

namespace {

int gate_rows(CellKind k, int hidden, int chunk) {
    switch (k) {
        case CellKind::SRN:
            return hidden;
        case CellKind::GRU:
            return 2 * hidden;
        case CellKind::UnsquashedGRU:
            return 3 * hidden;
        case CellKind::LSTM:
        case CellKind::SquashedLSTM:
            return 4 * hidden;
        case CellKind::ONLSTM:
            return 4 * hidden + 2 * (hidden / chunk);
    }
    return 0;
}

}  // namespace

Cell::Cell(CellKind kind, const std::string& prefix, int input_size, int hidden_size, ParameterSet& params, Rng& rng,
           int chunk)
    : kind_(kind), input_(input_size), hidden_(hidden_size), chunk_(chunk) {
    if (input_size <= 0 || hidden_size <= 0) throw ConfigError("cell sizes must be positive");
    if (kind == CellKind::ONLSTM && (chunk <= 0 || hidden_size % chunk != 0))
        throw ConfigError("ON-LSTM hidden size " + std::to_string(hidden_size) + " is not divisible by chunk factor " +
                          std::to_string(chunk));
    const int fan_in = hidden_size + input_size;
    const int rows = gate_rows(kind, hidden_size, chunk);
    W_ = &params.add_uniform(prefix + ".W", rows, fan_in, fan_in, rng);
    b_ = &params.add_zeros(prefix + ".b", rows, 1);
    if (kind == CellKind::GRU || kind == CellKind::UnsquashedGRU) {
        Wx_ = &params.add_uniform(prefix + ".Wx", hidden_size, fan_in, fan_in, rng);
        bx_ = &params.add_zeros(prefix + ".bx", hidden_size, 1);
    }
}

CellState Cell::initial(Tape& tape) const {
    CellState s;
    s.h = tape.zeros(hidden_);
    if (has_cell_state(kind_)) s.c = tape.zeros(hidden_);
    return s;
}

Var Cell::gate_preactivation(Tape& tape, const CellState& s, Var x) const {
    return tape.affine(tape.param(*W_), tape.concat({s.h, x}), tape.param(*b_));
}

Var Cell::gate(Tape& tape, Var pre, int index) const { return tape.slice(pre, Eigen::Index(index) * hidden_, hidden_); }

CellState Cell::lstm_family(Tape& tape, const CellState& s, Var pre) const {
    Var i = tape.sigmoid(gate(tape, pre, 0));
    Var f = tape.sigmoid(gate(tape, pre, 1));
    Var g = tape.tanh(gate(tape, pre, 2));
    Var o = tape.sigmoid(gate(tape, pre, 3));
    CellState out;
    if (kind_ == CellKind::SquashedLSTM) {
        Var denom = tape.clamp_min(tape.add(f, i), kSquashEps);
        out.c = tape.add(tape.mul(tape.div(f, denom), s.c), tape.mul(tape.div(i, denom), g));
    } else {
        out.c = tape.add(tape.mul(f, s.c), tape.mul(i, g));
    }
    out.h = tape.mul(o, tape.tanh(out.c));
    return out;
}

Cell::Master Cell::master_gates(Tape& tape, Var pre) const {
    if (kind_ != CellKind::ONLSTM) throw ContractViolation("master gates exist only in ON-LSTM");
    const Eigen::Index m = hidden_ / chunk_;
    const Eigen::Index base = 4 * Eigen::Index(hidden_);
    Var mf = tape.cumsum(tape.softmax(tape.slice(pre, base, m)));
    Var mi = tape.one_minus(tape.cumsum(tape.softmax(tape.slice(pre, base + m, m))));
    return {tape.repeat_each(mf, chunk_), tape.repeat_each(mi, chunk_)};
}

CellState Cell::onlstm_update(Tape& tape, const CellState& s, Var pre, const Master& m) const {
    Var i = tape.sigmoid(gate(tape, pre, 0));
    Var f = tape.sigmoid(gate(tape, pre, 1));
    Var g = tape.tanh(gate(tape, pre, 2));
    Var o = tape.sigmoid(gate(tape, pre, 3));
    Var omega = tape.mul(m.forget, m.input);
    Var f_hat = tape.add(tape.mul(f, omega), tape.sub(m.forget, omega));
    Var i_hat = tape.add(tape.mul(i, omega), tape.sub(m.input, omega));
    CellState out;
    out.c = tape.add(tape.mul(f_hat, s.c), tape.mul(i_hat, g));
    out.h = tape.mul(o, tape.tanh(out.c));
    return out;
}

CellState Cell::step(Tape& tape, const CellState& s, Var x) const {
    if (tape.value(x).rows() != input_) throw ContractViolation("cell input has the wrong size");
    Var pre = gate_preactivation(tape, s, x);
    switch (kind_) {
        case CellKind::SRN:
            return {tape.tanh(pre), {}};
        case CellKind::GRU:
        case CellKind::UnsquashedGRU: {
            Var r = tape.sigmoid(gate(tape, pre, 0));
            Var z = tape.sigmoid(gate(tape, pre, 1));
            Var cand = tape.tanh(tape.affine(tape.param(*Wx_), tape.concat({tape.mul(r, s.h), x}), tape.param(*bx_)));
            if (kind_ == CellKind::GRU) return {tape.add(tape.mul(z, s.h), tape.mul(tape.one_minus(z), cand)), {}};
            Var i = tape.sigmoid(gate(tape, pre, 2));
            return {tape.add(tape.mul(z, s.h), tape.mul(i, cand)), {}};
        }
        case CellKind::LSTM:
        case CellKind::SquashedLSTM:
            return lstm_family(tape, s, pre);
        case CellKind::ONLSTM:
            return onlstm_update(tape, s, pre, master_gates(tape, pre));
    }
    throw ContractViolation("unknown cell kind");
}

}  // namespace hbias
