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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hbias/rng.hpp"

namespace hbias {

#ifdef HBIAS_REAL_FLOAT
using Real = float;
inline constexpr std::string_view kRealName = "float32";
#else
using Real = double;
inline constexpr std::string_view kRealName = "float64";
#endif

using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Trainable tensor (rank <= 2) with a gradient accumulator.
struct Parameter {
    std::string name;
    Mat value;
    Mat grad;

    Parameter(std::string n, Eigen::Index rows, Eigen::Index cols)
        : name(std::move(n)), value(Mat::Zero(rows, cols)), grad(Mat::Zero(rows, cols)) {}
    void zero_grad() { grad.setZero(); }
};

/// Owns parameters; insertion order is the stable iteration order.
class ParameterSet {
public:
    /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
    Parameter& add_uniform(const std::string& name, Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in,
                           Rng& rng);
    Parameter& add_zeros(const std::string& name, Eigen::Index rows, Eigen::Index cols);

    Parameter& get(std::string_view name);
    const Parameter& get(std::string_view name) const;
    bool contains(std::string_view name) const;

    std::size_t size() const noexcept { return params_.size(); }
    Parameter& operator[](std::size_t i) { return *params_[i]; }
    const Parameter& operator[](std::size_t i) const { return *params_[i]; }
    std::vector<Parameter*> all();

    std::size_t scalar_count() const;
    void zero_grad();
    /// Copies values from `other`, which must have identical names and shapes.
    void copy_values_from(const ParameterSet& other);

private:
    std::vector<std::unique_ptr<Parameter>> params_;
    Parameter& add(const std::string& name, Eigen::Index rows, Eigen::Index cols);
};

class Tape;

/// Handle to a recorded value.
struct Var {
    int id = -1;
    bool valid() const noexcept { return id >= 0; }
};

/// Reverse-mode recorder. Values are column vectors or matrices; every
/// forward op checks that its result is finite. Parameters enter through
/// `param` (one node per parameter per tape) and receive gradients directly
/// in their accumulators on `backward`.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    void clear();
    std::size_t size() const noexcept { return nodes_.size(); }

    Var param(Parameter& p);
    Var constant(Mat value);
    Var zeros(Eigen::Index rows, Eigen::Index cols = 1);

    const Mat& value(Var v) const;
    /// Gradient of the last backward pass w.r.t. a node (zero if unreached).
    Mat grad(Var v) const;

    Var affine(Var W, Var x, Var b);  // W x + b
    Var matvec(Var W, Var x);         // W x
    Var matvec_t(Var M, Var v);       // M^T v
    Var matmul(Var A, Var B);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var div(Var a, Var b);
    Var sigmoid(Var x);
    Var tanh(Var x);
    Var exp(Var x);
    Var scale_shift(Var x, Real scale, Real shift);  // scale * x + shift
    Var one_minus(Var x) { return scale_shift(x, -1, 1); }
    Var clamp_min(Var x, Real lo);
    Var concat(const std::vector<Var>& parts);  // vertical
    Var hstack(const std::vector<Var>& columns);
    Var slice(Var x, Eigen::Index begin, Eigen::Index length);  // rows
    Var softmax(Var x);
    Var cumsum(Var x);
    Var repeat_each(Var x, Eigen::Index times);
    Var add_col_broadcast(Var M, Var v);  // M + v 1^T
    Var sum(const std::vector<Var>& scalars);
    /// Column `index` of an embedding table stored as (dim x vocab).
    Var embedding(Parameter& table, Eigen::Index index);
    /// -log softmax(logits)[target], a 1x1 value.
    Var softmax_cross_entropy(Var logits, Eigen::Index target);

    /// Accumulates d loss / d parameter into every reachable parameter's
    /// gradient. `loss` must be 1x1.
    void backward(Var loss, Real seed = 1);

private:
    enum class Op : std::uint8_t {
        Param, Constant, Affine, MatVec, MatVecT, MatMul, Add, Sub, Mul, Div, Sigmoid, Tanh, Exp, ScaleShift,
        ClampMin, Concat, HStack, Slice, Softmax, Cumsum, RepeatEach, AddColBroadcast, Sum, Embedding, SoftmaxXent
    };
    struct Node {
        Op op;
        int a = -1, b = -1, c = -1;
        std::vector<int> many;
        Mat value;
        Mat grad;
        Parameter* param = nullptr;
        Eigen::Index i0 = 0;
        Real s0 = 0, s1 = 0;
        bool needs_grad = false;
    };
    std::vector<Node> nodes_;
    std::vector<std::pair<Parameter*, int>> param_nodes_;

    const Mat& val(int id) const;
    Node& push(Op op, Mat value, std::initializer_list<int> inputs);
    void check(const Node& n) const;
    void accumulate(int id, const Mat& g);
    template <typename Expr>
    void accumulate_expr(int id, const Expr& g);
};

}  // namespace hbias
