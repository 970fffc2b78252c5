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

#include "hbias/autodiff/tape.hpp"
#include "hbias/rng.hpp"

namespace hbias {

enum class CellKind { SRN, GRU, LSTM, SquashedLSTM, UnsquashedGRU, ONLSTM };

std::string_view to_string(CellKind k);
CellKind cell_kind_from_string(std::string_view s);
bool has_cell_state(CellKind k);

struct CellState {
    Var h;
    Var c;  // LSTM family only
};

/// One recurrent step function with its own parameters. Gate weights act on
/// [h_{t-1}; x_t] and are stacked row-wise in a single matrix `W` / `b`:
///   SRN             [h]
///   GRU             [r z]            plus candidate Wx, bx on [r*h; x]
///   UnsquashedGRU   [r z i]          plus candidate Wx, bx
///   LSTM, squashed  [i f g o]
///   ONLSTM          [i f g o mf mi]  master gates have hidden/chunk rows
class Cell {
public:
    static constexpr Real kSquashEps = Real(1e-12);

    Cell(CellKind kind, const std::string& prefix, int input_size, int hidden_size, ParameterSet& params, Rng& rng,
         int chunk = 8);

    CellKind kind() const noexcept { return kind_; }
    int input_size() const noexcept { return input_; }
    int hidden_size() const noexcept { return hidden_; }
    int chunk() const noexcept { return chunk_; }

    Parameter& W() const { return *W_; }
    Parameter& b() const { return *b_; }
    Parameter* Wx() const { return Wx_; }
    Parameter* bx() const { return bx_; }

    CellState initial(Tape& tape) const;
    CellState step(Tape& tape, const CellState& s, Var x) const;

    /// ON-LSTM master gates expanded to hidden size: forget gate is a cumax
    /// (monotone non-decreasing), input gate is 1 - cumax (non-increasing).
    struct Master {
        Var forget;
        Var input;
    };
    Master master_gates(Tape& tape, Var pre_activation) const;
    /// ON-LSTM cell update given master gates; with all-ones masters this
    /// is the plain LSTM update.
    CellState onlstm_update(Tape& tape, const CellState& s, Var pre_activation, const Master& m) const;
    /// Stacked gate pre-activations W [h; x] + b.
    Var gate_preactivation(Tape& tape, const CellState& s, Var x) const;

private:
    CellKind kind_;
    int input_, hidden_, chunk_;
    Parameter* W_ = nullptr;
    Parameter* b_ = nullptr;
    Parameter* Wx_ = nullptr;
    Parameter* bx_ = nullptr;

    Var gate(Tape& tape, Var pre, int index) const;
    CellState lstm_family(Tape& tape, const CellState& s, Var pre) const;
};

}  // namespace hbias
