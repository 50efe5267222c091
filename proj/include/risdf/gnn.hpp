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


#ifndef RISDF_GNN_HPP
#define RISDF_GNN_HPP

#include "risdf/channel.hpp"
#include "risdf/config.hpp"
#include "risdf/nn.hpp"
#include "risdf/phy.hpp"
#include "risdf/readout.hpp"

#include <functional>
#include <string>
#include <vector>

namespace risdf
{

// Fixed (non-learned) multipliers applied to each input family before the
// first layer. Fitted once from training data and stored with the weights.
struct InputScale
{
    double h1_cascade = 1.0;
    double h1_direct = 1.0;
    double hr = 1.0;
    double h2_cascade = 1.0;
    double h2_direct = 1.0;
};

InputScale fit_input_scale(const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                           std::size_t max_samples = 256);

/// Every learnable function of the two-phase network. The layout depends on
/// M, N, L, I, J, q and D but not on K, so one model serves any group size.
class GnnParams
{
public:
    explicit GnnParams(const SystemConfig &cfg, int hidden_layers = 2);

    void init(std::uint64_t seed) { net.init(seed); }
    std::size_t size() const { return net.size(); }
    const DenseStack &stack(const std::string &name) const { return net.stack(name); }
    // Throws ConfigError if cfg's dimensions disagree with the layout.
    void check_compatible(const SystemConfig &cfg) const;

    ParamSet net;
    InputScale scale;
    int M, N, L, I, J, q, D, hidden_layers;
};

void save_checkpoint(const GnnParams &params, const std::string &path);
GnnParams load_checkpoint(const std::string &path);

// ---------- inputs ----------

struct Phase1Inputs
{
    std::vector<CMatrix> H1; // [u] (N+1) x M; rows 0..N-1 cascaded, row N direct
    std::vector<CMatrix> HR; // [i*J + j] M x L, relay channel through RIS i with unit phases
};
Phase1Inputs build_phase1_inputs(const ChannelRealization &real, const SystemConfig &cfg);

struct Phase2Inputs
{
    std::vector<CMatrix> H2; // [u] (N+1) x L for the relay serving u's group
};
Phase2Inputs build_phase2_inputs(const ChannelRealization &real, const std::vector<int> &assign,
                                 const SystemConfig &cfg);

// ---------- graph stages (on a tape) ----------

// Tape node ids of the RIS features (width x I) and user features (width x U).
struct NodeState
{
    int ris = -1;
    int users = -1;
    int layer = 0;
    bool phase2 = false;
};

struct ReadoutIds
{
    int theta = -1; // 2N x I
    int beams = -1; // 2M x U (phase 1) or 2L x U (phase 2)
};

NodeState phase1_init(Tape &tape, const Phase1Inputs &in, const GnnParams &params, const SystemConfig &cfg);
NodeState phase1_update(Tape &tape, const NodeState &state, const GnnParams &params, const SystemConfig &cfg, int d);
ReadoutIds phase1_readout(Tape &tape, const NodeState &state, const GnnParams &params);

NodeState phase2_init(Tape &tape, const NodeState &phase1, const Phase2Inputs &in, const GnnParams &params,
                      const SystemConfig &cfg);
NodeState phase2_update(Tape &tape, const NodeState &state, const GnnParams &params, const SystemConfig &cfg, int d);
ReadoutIds phase2_readout(Tape &tape, const NodeState &state, const GnnParams &params);

// ---------- end to end ----------

enum class Mode
{
    train, // continuous phases
    eval   // quantized phases
};

struct GnnOutput
{
    Strategy strategy;
    RateReport report;
};

// Phase 1, then phase 2 for every relay assignment; keeps the preferred one.
GnnOutput forward(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg, Mode mode);
// Same network with the relay assignment fixed.
GnnOutput forward_pinned(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg, Mode mode,
                         const std::vector<int> &assign);

// Derivatives of a loss with respect to every rate and every assigned relay SINR, [i][k].
struct ReportGrad
{
    std::vector<std::vector<double>> rate_bar;
    std::vector<std::vector<double>> relay_bar;
};
using ReportLoss = std::function<double(const RateReport &, ReportGrad &)>;

// Train-mode forward, loss, and its gradient added into grad. Returns the loss.
double forward_backward(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg,
                        const ReportLoss &loss, RVector &grad, GnnOutput *out = nullptr);

} // namespace risdf

#endif
