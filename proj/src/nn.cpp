// SPDX-License-Identifier: Apache-2.0
//
// risdf: multi-RIS / decode-and-forward relay MISO downlink simulator and optimizer
// Copyright (C) 2026 The risdf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "risdf/nn.hpp"
#include "risdf/config.hpp"

#include <cmath>
#include <numeric>

namespace risdf
{

namespace
{

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

} // namespace

// ---------- ParamSet ----------

const DenseStack &ParamSet::add_stack(const std::string &name, int in, int hidden, int hidden_layers, int out)
{
    if (in < 1 || out < 1 || (hidden_layers > 0 && hidden < 1))
        throw ConfigError("dense stack '" + name + "' has a non-positive width");
    for (const auto &s : stacks_)
        if (s.name == name)
            throw ConfigError("duplicate dense stack '" + name + "'");
    DenseStack s;
    s.name = name;
    int width = in;
    for (int h = 0; h < hidden_layers; ++h)
    {
        s.layers.push_back({size_, width, hidden, true});
        size_ += s.layers.back().size();
        width = hidden;
    }
    s.layers.push_back({size_, width, out, false});
    size_ += s.layers.back().size();
    stacks_.push_back(std::move(s));
    values = RVector::Zero(static_cast<Eigen::Index>(size_));
    return stacks_.back();
}

const DenseStack &ParamSet::stack(const std::string &name) const
{
    for (const auto &s : stacks_)
        if (s.name == name)
            return s;
    throw ConfigError("no dense stack named '" + name + "'");
}

void ParamSet::init(std::uint64_t seed)
{
    Rng rng(seed);
    values = RVector::Zero(static_cast<Eigen::Index>(size_));
    for (const auto &s : stacks_)
        for (const auto &l : s.layers)
        {
            const double limit = std::sqrt(6.0 / (l.in + l.out));
            const std::size_t nw = static_cast<std::size_t>(l.in) * l.out;
            for (std::size_t w = 0; w < nw; ++w)
                values(static_cast<Eigen::Index>(l.offset + w)) = rng.uniform(-limit, limit);
        }
}

// ---------- Tape ----------

int Tape::push(Node n)
{
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

RMatrix &Tape::grad_of(int id)
{
    Node &n = nodes_[static_cast<std::size_t>(id)];
    if (!n.has_grad)
    {
        n.grad = RMatrix::Zero(n.value.rows(), n.value.cols());
        n.has_grad = true;
    }
    return n.grad;
}

int Tape::constant(RMatrix value)
{
    Node n;
    n.value = std::move(value);
    return push(std::move(n));
}

int Tape::affine(int x, const DenseLayer &layer)
{
    const RMatrix &xv = value(x);
    if (xv.rows() != layer.in)
        throw ConfigError("affine layer expects input width " + std::to_string(layer.in) + ", got " +
                          std::to_string(xv.rows()));
    if (layer.offset + layer.size() > static_cast<std::size_t>(params_.size()))
        throw ConfigError("affine layer lies outside the parameter buffer");
    Eigen::Map<const RowMajor> W(params_.data() + layer.offset, layer.out, layer.in);
    Eigen::Map<const RVector> b(params_.data() + layer.offset + static_cast<std::size_t>(layer.in) * layer.out,
                                layer.out);
    Node n;
    n.op = Op::affine;
    n.in = {x};
    n.layer = layer;
    n.value = W * xv;
    n.value.colwise() += b;
    return push(std::move(n));
}

int Tape::silu(int x)
{
    Node n;
    n.op = Op::silu;
    n.in = {x};
    n.value = value(x).unaryExpr([](double v) { return v * sigmoid(v); });
    return push(std::move(n));
}

int Tape::dense(int x, const DenseStack &stack)
{
    int h = x;
    for (const auto &l : stack.layers)
    {
        h = affine(h, l);
        if (l.activation)
            h = silu(h);
    }
    return h;
}

int Tape::vcat(const std::vector<int> &xs)
{
    if (xs.empty())
        throw DomainError("vcat of nothing");
    Eigen::Index rows = 0, cols = value(xs.front()).cols();
    for (int x : xs)
    {
        if (value(x).cols() != cols)
            throw DomainError("vcat column count mismatch");
        rows += value(x).rows();
    }
    Node n;
    n.op = Op::vcat;
    n.in = xs;
    n.value.resize(rows, cols);
    Eigen::Index r = 0;
    for (int x : xs)
    {
        n.value.middleRows(r, value(x).rows()) = value(x);
        r += value(x).rows();
    }
    return push(std::move(n));
}

int Tape::hcat(const std::vector<int> &xs)
{
    if (xs.empty())
        throw DomainError("hcat of nothing");
    Eigen::Index cols = 0, rows = value(xs.front()).rows();
    for (int x : xs)
    {
        if (value(x).rows() != rows)
            throw DomainError("hcat row count mismatch");
        cols += value(x).cols();
    }
    Node n;
    n.op = Op::hcat;
    n.in = xs;
    n.value.resize(rows, cols);
    Eigen::Index c = 0;
    for (int x : xs)
    {
        n.value.middleCols(c, value(x).cols()) = value(x);
        c += value(x).cols();
    }
    return push(std::move(n));
}

int Tape::col_mean(int x, int start, int count)
{
    const RMatrix &xv = value(x);
    if (count < 1 || start < 0 || start + count > xv.cols())
        throw DomainError("col_mean range out of bounds");
    Node n;
    n.op = Op::col_mean;
    n.in = {x};
    n.start = start;
    n.count = count;
    n.value = xv.middleCols(start, count).rowwise().mean();
    return push(std::move(n));
}

int Tape::gather_cols(int x, const std::vector<int> &idx)
{
    const RMatrix &xv = value(x);
    Node n;
    n.op = Op::gather;
    n.in = {x};
    n.idx = idx;
    n.value.resize(xv.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c)
    {
        if (idx[c] < 0 || idx[c] >= xv.cols())
            throw DomainError("gather_cols index out of bounds");
        n.value.col(static_cast<Eigen::Index>(c)) = xv.col(idx[c]);
    }
    return push(std::move(n));
}

int Tape::max_others(int x)
{
    const RMatrix &xv = value(x);
    const Eigen::Index R = xv.rows(), C = xv.cols();
    Node n;
    n.op = Op::max_others;
    n.in = {x};
    n.value = RMatrix::Zero(R, C);
    n.pick = Eigen::MatrixXi::Constant(R, C, -1);
    if (C > 1)
        for (Eigen::Index r = 0; r < R; ++r)
        {
            Eigen::Index first = 0, second = -1;
            for (Eigen::Index c = 1; c < C; ++c)
            {
                if (xv(r, c) > xv(r, first))
                {
                    second = first;
                    first = c;
                }
                else if (second < 0 || xv(r, c) > xv(r, second))
                    second = c;
            }
            for (Eigen::Index c = 0; c < C; ++c)
            {
                const Eigen::Index p = c == first ? second : first;
                n.value(r, c) = xv(r, p);
                n.pick(r, c) = static_cast<int>(p);
            }
        }
    return push(std::move(n));
}

void Tape::seed(int id, const RMatrix &g)
{
    RMatrix &dst = grad_of(id);
    if (dst.rows() != g.rows() || dst.cols() != g.cols())
        throw DomainError("seed gradient shape mismatch");
    dst += g;
}

void Tape::backward(RVector &param_grad)
{
    if (param_grad.size() != params_.size())
        throw DomainError("parameter gradient buffer has the wrong size");
    for (std::size_t k = nodes_.size(); k-- > 0;)
    {
        if (!nodes_[k].has_grad)
            continue;
        const Op op = nodes_[k].op;
        const RMatrix &g = nodes_[k].grad;
        switch (op)
        {
        case Op::constant:
            break;
        case Op::affine:
        {
            const DenseLayer &l = nodes_[k].layer;
            const int x = nodes_[k].in[0];
            const RMatrix &xv = value(x);
            Eigen::Map<const RowMajor> W(params_.data() + l.offset, l.out, l.in);
            Eigen::Map<RowMajor> gW(param_grad.data() + l.offset, l.out, l.in);
            Eigen::Map<RVector> gb(param_grad.data() + l.offset + static_cast<std::size_t>(l.in) * l.out, l.out);
            gW.noalias() += g * xv.transpose();
            gb += g.rowwise().sum();
            grad_of(x).noalias() += W.transpose() * g;
            break;
        }
        case Op::silu:
        {
            const int x = nodes_[k].in[0];
            const RMatrix &xv = value(x);
            RMatrix d = xv.unaryExpr(
                [](double v)
                {
                    const double s = sigmoid(v);
                    return s * (1.0 + v * (1.0 - s));
                });
            grad_of(x) += g.cwiseProduct(d);
            break;
        }
        case Op::vcat:
        {
            Eigen::Index r = 0;
            for (int x : nodes_[k].in)
            {
                const Eigen::Index h = value(x).rows();
                grad_of(x) += g.middleRows(r, h);
                r += h;
            }
            break;
        }
        case Op::hcat:
        {
            Eigen::Index c = 0;
            for (int x : nodes_[k].in)
            {
                const Eigen::Index w = value(x).cols();
                grad_of(x) += g.middleCols(c, w);
                c += w;
            }
            break;
        }
        case Op::col_mean:
        {
            const int x = nodes_[k].in[0];
            const int start = nodes_[k].start, count = nodes_[k].count;
            RMatrix &gx = grad_of(x);
            for (int c = start; c < start + count; ++c)
                gx.col(c) += g.col(0) / count;
            break;
        }
        case Op::gather:
        {
            const int x = nodes_[k].in[0];
            RMatrix &gx = grad_of(x);
            const auto &idx = nodes_[k].idx;
            for (std::size_t c = 0; c < idx.size(); ++c)
                gx.col(idx[c]) += g.col(static_cast<Eigen::Index>(c));
            break;
        }
        case Op::max_others:
        {
            const int x = nodes_[k].in[0];
            RMatrix &gx = grad_of(x);
            const Eigen::MatrixXi &pick = nodes_[k].pick;
            for (Eigen::Index c = 0; c < g.cols(); ++c)
                for (Eigen::Index r = 0; r < g.rows(); ++r)
                    if (pick(r, c) >= 0)
                        gx(r, pick(r, c)) += g(r, c);
            break;
        }
        }
    }
}

} // namespace risdf
