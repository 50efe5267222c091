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


#ifndef RISDF_NN_HPP
#define RISDF_NN_HPP

#include "risdf/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace risdf
{

using RMatrix = Eigen::MatrixXd;

// One affine layer inside a flat parameter buffer: W (out x in, row-major)
// followed by b (out).
struct DenseLayer
{
    std::size_t offset = 0;
    int in = 0;
    int out = 0;
    bool activation = false; // SiLU after the affine map

    std::size_t size() const { return static_cast<std::size_t>(in) * out + static_cast<std::size_t>(out); }
};

struct DenseStack
{
    std::string name;
    std::vector<DenseLayer> layers;

    int in() const { return layers.front().in; }
    int out() const { return layers.back().out; }
};

// Named dense stacks laid out back to back in one vector.
class ParamSet
{
public:
    // hidden_layers = 0 gives a single affine map (no nonlinearity).
    const DenseStack &add_stack(const std::string &name, int in, int hidden, int hidden_layers, int out);
    const DenseStack &stack(const std::string &name) const;
    const std::vector<DenseStack> &stacks() const { return stacks_; }
    std::size_t size() const { return size_; }

    // Glorot-uniform weights, zero biases.
    void init(std::uint64_t seed);

    RVector values;

private:
    std::vector<DenseStack> stacks_;
    std::size_t size_ = 0;
};

// Reverse-mode tape over real matrices whose columns are independent items
// (nodes of the same kind). Parameters are read from a flat buffer and their
// gradients accumulated into a buffer of the same layout.
class Tape
{
public:
    explicit Tape(const RVector &params) : params_(params) {}

    int constant(RMatrix value);
    int affine(int x, const DenseLayer &layer);
    int silu(int x);
    int dense(int x, const DenseStack &stack);
    int vcat(const std::vector<int> &xs);
    int hcat(const std::vector<int> &xs);
    // Mean of columns [start, start + count) as one column.
    int col_mean(int x, int start, int count);
    // Column c of the result is column idx[c] of x.
    int gather_cols(int x, const std::vector<int> &idx);
    // Column c is the elementwise max over all other columns; zeros for a single column.
    int max_others(int x);

    const RMatrix &value(int id) const { return nodes_.at(static_cast<std::size_t>(id)).value; }
    int rows(int id) const { return static_cast<int>(value(id).rows()); }
    std::size_t size() const { return nodes_.size(); }

    // Adds g to the output gradient of node id.
    void seed(int id, const RMatrix &g);
    // Propagates seeded gradients; parameter gradients are added to param_grad.
    void backward(RVector &param_grad);

private:
    enum class Op
    {
        constant,
        affine,
        silu,
        vcat,
        hcat,
        col_mean,
        gather,
        max_others
    };
    struct Node
    {
        Op op = Op::constant;
        std::vector<int> in;
        RMatrix value;
        RMatrix grad;
        bool has_grad = false;
        DenseLayer layer;
        int start = 0, count = 0;
        std::vector<int> idx;
        Eigen::MatrixXi pick;
    };
    int push(Node n);
    RMatrix &grad_of(int id);

    const RVector &params_;
    std::vector<Node> nodes_;
};

} // namespace risdf

#endif
