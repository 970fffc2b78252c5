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

#include "hbias/autodiff/tape.hpp"

#include <cmath>

#include "hbias/errors.hpp"

namespace hbias {

// ---------------------------------------------------------------------------
// ParameterSet

Parameter& ParameterSet::add(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    if (contains(name)) throw ContractViolation("duplicate parameter " + name);
    if (rows <= 0 || cols <= 0) throw ConfigError("parameter " + name + " needs a positive shape");
    params_.push_back(std::make_unique<Parameter>(name, rows, cols));
    return *params_.back();
}

Parameter& ParameterSet::add_uniform(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                                     Eigen::Index fan_in, Rng& rng) {
    Parameter& p = add(name, rows, cols);
    const double r = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) p.value(i, j) = static_cast<Real>(rng.uniform(-r, r));
    return p;
}

Parameter& ParameterSet::add_zeros(const std::string& name, Eigen::Index rows, Eigen::Index cols) {
    return add(name, rows, cols);
}

Parameter& ParameterSet::get(std::string_view name) {
    return const_cast<Parameter&>(static_cast<const ParameterSet&>(*this).get(name));
}

const Parameter& ParameterSet::get(std::string_view name) const {
    for (const auto& p : params_)
        if (p->name == name) return *p;
    throw ContractViolation("no parameter named " + std::string(name));
}

bool ParameterSet::contains(std::string_view name) const {
    for (const auto& p : params_)
        if (p->name == name) return true;
    return false;
}

std::vector<Parameter*> ParameterSet::all() {
    std::vector<Parameter*> out;
    out.reserve(params_.size());
    for (auto& p : params_) out.push_back(p.get());
    return out;
}

std::size_t ParameterSet::scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
    return n;
}

void ParameterSet::zero_grad() {
    for (auto& p : params_) p->zero_grad();
}

void ParameterSet::copy_values_from(const ParameterSet& other) {
    if (other.size() != size()) throw ContractViolation("parameter sets differ in size");
    for (std::size_t i = 0; i < size(); ++i) {
        const Parameter& src = other[i];
        Parameter& dst = *params_[i];
        if (src.name != dst.name || src.value.rows() != dst.value.rows() || src.value.cols() != dst.value.cols())
            throw ContractViolation("parameter sets differ at " + dst.name);
        dst.value = src.value;
    }
}

// ---------------------------------------------------------------------------
// Tape

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ContractViolation(std::string("shape mismatch in ") + what);
}

bool is_col(const Mat& m) { return m.cols() == 1; }

}  // namespace

void Tape::clear() {
    nodes_.clear();
    param_nodes_.clear();
}

const Mat& Tape::val(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    return n.param && n.op == Op::Param ? n.param->value : n.value;
}

const Mat& Tape::value(Var v) const {
    if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) throw ContractViolation("invalid tape handle");
    return val(v.id);
}

Mat Tape::grad(Var v) const {
    const Node& n = nodes_.at(static_cast<std::size_t>(v.id));
    if (n.op == Op::Param) return n.param->grad;
    if (n.grad.size() == 0) return Mat::Zero(val(v.id).rows(), val(v.id).cols());
    return n.grad;
}

void Tape::check(const Node& n) const {
    if (!n.value.allFinite()) throw NumericHealthError("non-finite value produced by the numeric engine");
}

Tape::Node& Tape::push(Op op, Mat value, std::initializer_list<int> inputs) {
    Node n;
    n.op = op;
    n.value = std::move(value);
    auto it = inputs.begin();
    if (it != inputs.end()) n.a = *it++;
    if (it != inputs.end()) n.b = *it++;
    if (it != inputs.end()) n.c = *it++;
    for (int id : inputs) n.needs_grad = n.needs_grad || nodes_[static_cast<std::size_t>(id)].needs_grad;
    check(n);
    nodes_.push_back(std::move(n));
    return nodes_.back();
}

Var Tape::param(Parameter& p) {
    for (const auto& [ptr, id] : param_nodes_)
        if (ptr == &p) return {id};
    Node n;
    n.op = Op::Param;
    n.param = &p;
    n.needs_grad = true;
    nodes_.push_back(std::move(n));
    const int id = static_cast<int>(nodes_.size()) - 1;
    param_nodes_.emplace_back(&p, id);
    return {id};
}

Var Tape::constant(Mat value) {
    Node n;
    n.op = Op::Constant;
    n.value = std::move(value);
    check(n);
    nodes_.push_back(std::move(n));
    return {static_cast<int>(nodes_.size()) - 1};
}

Var Tape::zeros(Eigen::Index rows, Eigen::Index cols) { return constant(Mat::Zero(rows, cols)); }

#define HBIAS_LAST Var { static_cast<int>(nodes_.size()) - 1 }

Var Tape::affine(Var W, Var x, Var b) {
    const Mat &w = val(W.id), &xv = val(x.id), &bv = val(b.id);
    require(is_col(xv) && w.cols() == xv.rows() && bv.rows() == w.rows() && is_col(bv), "affine");
    Mat y = bv;
    y.noalias() += w * xv;
    push(Op::Affine, std::move(y), {W.id, x.id, b.id});
    return HBIAS_LAST;
}

Var Tape::matvec(Var W, Var x) {
    const Mat &w = val(W.id), &xv = val(x.id);
    require(is_col(xv) && w.cols() == xv.rows(), "matvec");
    Mat y = w * xv;
    push(Op::MatVec, std::move(y), {W.id, x.id});
    return HBIAS_LAST;
}

Var Tape::matvec_t(Var M, Var v) {
    const Mat &m = val(M.id), &vv = val(v.id);
    require(is_col(vv) && m.rows() == vv.rows(), "matvec_t");
    Mat y = m.transpose() * vv;
    push(Op::MatVecT, std::move(y), {M.id, v.id});
    return HBIAS_LAST;
}

Var Tape::matmul(Var A, Var B) {
    const Mat &a = val(A.id), &b = val(B.id);
    require(a.cols() == b.rows(), "matmul");
    Mat y = a * b;
    push(Op::MatMul, std::move(y), {A.id, B.id});
    return HBIAS_LAST;
}

#define HBIAS_SAME_SHAPE(x, y, what) require((x).rows() == (y).rows() && (x).cols() == (y).cols(), what)

Var Tape::add(Var a, Var b) {
    HBIAS_SAME_SHAPE(val(a.id), val(b.id), "add");
    push(Op::Add, val(a.id) + val(b.id), {a.id, b.id});
    return HBIAS_LAST;
}

Var Tape::sub(Var a, Var b) {
    HBIAS_SAME_SHAPE(val(a.id), val(b.id), "sub");
    push(Op::Sub, val(a.id) - val(b.id), {a.id, b.id});
    return HBIAS_LAST;
}

Var Tape::mul(Var a, Var b) {
    HBIAS_SAME_SHAPE(val(a.id), val(b.id), "mul");
    push(Op::Mul, val(a.id).cwiseProduct(val(b.id)), {a.id, b.id});
    return HBIAS_LAST;
}

Var Tape::div(Var a, Var b) {
    HBIAS_SAME_SHAPE(val(a.id), val(b.id), "div");
    push(Op::Div, val(a.id).cwiseQuotient(val(b.id)), {a.id, b.id});
    return HBIAS_LAST;
}

Var Tape::sigmoid(Var x) {
    Mat y = val(x.id).unaryExpr([](Real v) {
        // split form avoids exp overflow for large |v|
        return v >= 0 ? Real(1) / (Real(1) + std::exp(-v)) : std::exp(v) / (Real(1) + std::exp(v));
    });
    push(Op::Sigmoid, std::move(y), {x.id});
    return HBIAS_LAST;
}

Var Tape::tanh(Var x) {
    push(Op::Tanh, val(x.id).array().tanh().matrix(), {x.id});
    return HBIAS_LAST;
}

Var Tape::exp(Var x) {
    push(Op::Exp, val(x.id).array().exp().matrix(), {x.id});
    return HBIAS_LAST;
}

Var Tape::scale_shift(Var x, Real scale, Real shift) {
    Node& n = push(Op::ScaleShift, (val(x.id).array() * scale + shift).matrix(), {x.id});
    n.s0 = scale;
    n.s1 = shift;
    return HBIAS_LAST;
}

Var Tape::clamp_min(Var x, Real lo) {
    Node& n = push(Op::ClampMin, val(x.id).cwiseMax(lo), {x.id});
    n.s0 = lo;
    return HBIAS_LAST;
}

Var Tape::concat(const std::vector<Var>& parts) {
    if (parts.empty()) throw ContractViolation("concat of nothing");
    Eigen::Index rows = 0;
    for (Var p : parts) {
        require(is_col(val(p.id)), "concat");
        rows += val(p.id).rows();
    }
    Mat y(rows, 1);
    Eigen::Index r = 0;
    bool needs = false;
    std::vector<int> ids;
    ids.reserve(parts.size());
    for (Var p : parts) {
        const Mat& v = val(p.id);
        y.middleRows(r, v.rows()) = v;
        r += v.rows();
        ids.push_back(p.id);
        needs = needs || nodes_[static_cast<std::size_t>(p.id)].needs_grad;
    }
    Node& n = push(Op::Concat, std::move(y), {});
    n.many = std::move(ids);
    n.needs_grad = needs;
    return HBIAS_LAST;
}

Var Tape::hstack(const std::vector<Var>& columns) {
    if (columns.empty()) throw ContractViolation("hstack of nothing");
    const Eigen::Index rows = val(columns[0].id).rows();
    Mat y(rows, static_cast<Eigen::Index>(columns.size()));
    bool needs = false;
    std::vector<int> ids;
    ids.reserve(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const Mat& v = val(columns[j].id);
        require(is_col(v) && v.rows() == rows, "hstack");
        y.col(static_cast<Eigen::Index>(j)) = v;
        ids.push_back(columns[j].id);
        needs = needs || nodes_[static_cast<std::size_t>(columns[j].id)].needs_grad;
    }
    Node& n = push(Op::HStack, std::move(y), {});
    n.many = std::move(ids);
    n.needs_grad = needs;
    return HBIAS_LAST;
}

Var Tape::slice(Var x, Eigen::Index begin, Eigen::Index length) {
    const Mat& v = val(x.id);
    require(is_col(v) && begin >= 0 && length > 0 && begin + length <= v.rows(), "slice");
    Node& n = push(Op::Slice, v.middleRows(begin, length), {x.id});
    n.i0 = begin;
    return HBIAS_LAST;
}

Var Tape::softmax(Var x) {
    const Mat& v = val(x.id);
    require(is_col(v), "softmax");
    Mat y = (v.array() - v.maxCoeff()).exp().matrix();
    y /= y.sum();
    push(Op::Softmax, std::move(y), {x.id});
    return HBIAS_LAST;
}

Var Tape::cumsum(Var x) {
    const Mat& v = val(x.id);
    require(is_col(v), "cumsum");
    Mat y(v.rows(), 1);
    Real acc = 0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) y(i, 0) = acc += v(i, 0);
    push(Op::Cumsum, std::move(y), {x.id});
    return HBIAS_LAST;
}

Var Tape::repeat_each(Var x, Eigen::Index times) {
    const Mat& v = val(x.id);
    require(is_col(v) && times > 0, "repeat_each");
    Mat y(v.rows() * times, 1);
    for (Eigen::Index i = 0; i < v.rows(); ++i) y.middleRows(i * times, times).setConstant(v(i, 0));
    Node& n = push(Op::RepeatEach, std::move(y), {x.id});
    n.i0 = times;
    return HBIAS_LAST;
}

Var Tape::add_col_broadcast(Var M, Var v) {
    const Mat &m = val(M.id), &vv = val(v.id);
    require(is_col(vv) && vv.rows() == m.rows(), "add_col_broadcast");
    Mat y = m.colwise() + vv.col(0);
    push(Op::AddColBroadcast, std::move(y), {M.id, v.id});
    return HBIAS_LAST;
}

Var Tape::sum(const std::vector<Var>& scalars) {
    if (scalars.empty()) throw ContractViolation("sum of nothing");
    Real s = 0;
    bool needs = false;
    std::vector<int> ids;
    ids.reserve(scalars.size());
    for (Var v : scalars) {
        const Mat& m = val(v.id);
        require(m.size() == 1, "sum");
        s += m(0, 0);
        ids.push_back(v.id);
        needs = needs || nodes_[static_cast<std::size_t>(v.id)].needs_grad;
    }
    Node& n = push(Op::Sum, Mat::Constant(1, 1, s), {});
    n.many = std::move(ids);
    n.needs_grad = needs;
    return HBIAS_LAST;
}

Var Tape::embedding(Parameter& table, Eigen::Index index) {
    if (index < 0 || index >= table.value.cols()) throw ContractViolation("embedding index out of range");
    Node& n = push(Op::Embedding, table.value.col(index), {});
    n.param = &table;
    n.i0 = index;
    n.needs_grad = true;
    return HBIAS_LAST;
}

Var Tape::softmax_cross_entropy(Var logits, Eigen::Index target) {
    const Mat& z = val(logits.id);
    require(is_col(z) && target >= 0 && target < z.rows(), "softmax_cross_entropy");
    const Real m = z.maxCoeff();
    const Real lse = m + std::log((z.array() - m).exp().sum());
    Node& n = push(Op::SoftmaxXent, Mat::Constant(1, 1, lse - z(target, 0)), {logits.id});
    n.i0 = target;
    n.s0 = lse;
    return HBIAS_LAST;
}

#undef HBIAS_LAST
#undef HBIAS_SAME_SHAPE

void Tape::accumulate(int id, const Mat& g) { accumulate_expr(id, g); }

template <typename Expr>
void Tape::accumulate_expr(int id, const Expr& g) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.needs_grad) return;
    if (n.op == Op::Param) {
        n.param->grad += g;
    } else if (n.grad.size() == 0) {
        n.grad = g;
    } else {
        n.grad += g;
    }
}

void Tape::backward(Var loss, Real seed) {
    if (loss.id < 0 || static_cast<std::size_t>(loss.id) >= nodes_.size())
        throw ContractViolation("invalid loss handle");
    if (val(loss.id).size() != 1) throw ContractViolation("backward needs a scalar loss");
    for (auto& n : nodes_)
        if (n.op != Op::Param) n.grad.resize(0, 0);
    nodes_[static_cast<std::size_t>(loss.id)].grad = Mat::Constant(1, 1, seed);

    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[static_cast<std::size_t>(i)];
        if (!n.needs_grad || n.op == Op::Param || n.grad.size() == 0) continue;
        const Mat& g = n.grad;  // inputs have lower ids, so this is never written below
        switch (n.op) {
            case Op::Param:
            case Op::Constant:
                break;
            case Op::Affine:
            case Op::MatVec: {
                const Mat& w = val(n.a);
                const Mat& x = val(n.b);
                if (nodes_[n.a].needs_grad) accumulate_expr(n.a, g * x.transpose());
                if (nodes_[n.b].needs_grad) accumulate_expr(n.b, w.transpose() * g);
                if (n.op == Op::Affine) accumulate(n.c, g);
                break;
            }
            case Op::MatVecT: {
                const Mat& m = val(n.a);
                const Mat& v = val(n.b);
                if (nodes_[n.a].needs_grad) accumulate_expr(n.a, v * g.transpose());
                if (nodes_[n.b].needs_grad) accumulate_expr(n.b, m * g);
                break;
            }
            case Op::MatMul: {
                const Mat& a = val(n.a);
                const Mat& b = val(n.b);
                if (nodes_[n.a].needs_grad) accumulate_expr(n.a, g * b.transpose());
                if (nodes_[n.b].needs_grad) accumulate_expr(n.b, a.transpose() * g);
                break;
            }
            case Op::Add:
                accumulate(n.a, g);
                accumulate(n.b, g);
                break;
            case Op::Sub:
                accumulate(n.a, g);
                accumulate_expr(n.b, -g);
                break;
            case Op::Mul:
                if (nodes_[n.a].needs_grad) accumulate_expr(n.a, g.cwiseProduct(val(n.b)));
                if (nodes_[n.b].needs_grad) accumulate_expr(n.b, g.cwiseProduct(val(n.a)));
                break;
            case Op::Div: {
                const Mat& a = val(n.a);
                const Mat& b = val(n.b);
                if (nodes_[n.a].needs_grad) accumulate_expr(n.a, g.cwiseQuotient(b));
                if (nodes_[n.b].needs_grad)
                    accumulate_expr(n.b, -(g.array() * a.array() / (b.array() * b.array())).matrix());
                break;
            }
            case Op::Sigmoid:
                accumulate_expr(n.a, (g.array() * n.value.array() * (1 - n.value.array())).matrix());
                break;
            case Op::Tanh:
                accumulate_expr(n.a, (g.array() * (1 - n.value.array().square())).matrix());
                break;
            case Op::Exp:
                accumulate_expr(n.a, g.cwiseProduct(n.value));
                break;
            case Op::ScaleShift:
                accumulate_expr(n.a, g * n.s0);
                break;
            case Op::ClampMin:
                accumulate_expr(n.a, (val(n.a).array() > n.s0).select(g, Mat::Zero(g.rows(), g.cols())));
                break;
            case Op::Concat: {
                Eigen::Index r = 0;
                for (int id : n.many) {
                    const Eigen::Index len = val(id).rows();
                    if (nodes_[id].needs_grad) accumulate_expr(id, g.middleRows(r, len));
                    r += len;
                }
                break;
            }
            case Op::HStack:
                for (std::size_t j = 0; j < n.many.size(); ++j)
                    if (nodes_[n.many[j]].needs_grad) accumulate_expr(n.many[j], g.col(static_cast<Eigen::Index>(j)));
                break;
            case Op::Slice: {
                Mat full = Mat::Zero(val(n.a).rows(), 1);
                full.middleRows(n.i0, g.rows()) = g;
                accumulate(n.a, full);
                break;
            }
            case Op::Softmax: {
                const Real dot = (g.array() * n.value.array()).sum();
                accumulate_expr(n.a, (n.value.array() * (g.array() - dot)).matrix());
                break;
            }
            case Op::Cumsum: {
                Mat d(g.rows(), 1);
                Real acc = 0;
                for (Eigen::Index k = g.rows(); k-- > 0;) d(k, 0) = acc += g(k, 0);
                accumulate(n.a, d);
                break;
            }
            case Op::RepeatEach: {
                const Eigen::Index rows = val(n.a).rows();
                Mat d(rows, 1);
                for (Eigen::Index k = 0; k < rows; ++k) d(k, 0) = g.middleRows(k * n.i0, n.i0).sum();
                accumulate(n.a, d);
                break;
            }
            case Op::AddColBroadcast:
                accumulate(n.a, g);
                if (nodes_[n.b].needs_grad) accumulate_expr(n.b, g.rowwise().sum());
                break;
            case Op::Sum:
                for (int id : n.many) accumulate(id, g);
                break;
            case Op::Embedding:
                n.param->grad.col(n.i0) += g.col(0);
                break;
            case Op::SoftmaxXent: {
                const Mat& z = val(n.a);
                Mat d = (z.array() - n.s0).exp().matrix();
                d(n.i0, 0) -= 1;
                accumulate_expr(n.a, d * g(0, 0));
                break;
            }
        }
    }
}

}  // namespace hbias
