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


#ifndef RISDF_BASELINES_HPP
#define RISDF_BASELINES_HPP

#include "risdf/gnn.hpp"
#include "risdf/training.hpp"

#include <vector>

namespace risdf
{

// Uniform phases from the discrete set, Gaussian beamformers at full power,
// every group served by relay 0.
Strategy random_strategy(const ChannelRealization &real, const SystemConfig &cfg, Rng &rng);

// Column u proportional to conj(channels[u]), then scaled jointly to the
// budget. A zero channel set is returned as zeros with degenerate = true.
CMatrix mrt_beamforming(const std::vector<CVector> &channels, double budget, bool *degenerate = nullptr);

// Strategy for given phases and assignment with both beamformers matched to
// the induced effective channels.
Strategy mrt_strategy(const ChannelRealization &real, const SystemConfig &cfg, const std::vector<CVector> &theta1,
                      const std::vector<CVector> &theta2, const std::vector<int> &assign);

// ---------- particle swarm ----------

struct PsoConfig
{
    int particles = 64;
    int iterations = 200;
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    std::uint64_t seed = 1;
    double beta = 1000.0;   // decode penalty in the fitness
    double lambda = 1000.0; // rate penalty in the fitness
};

struct PsoResult
{
    Strategy strategy;
    RateReport report;
    std::vector<double> trace; // best-so-far fitness after initialization and each iteration
    std::size_t reinitialized = 0;
};

// Per-realization search over [theta1 angles, theta2 angles, Re/Im G, Re/Im F].
// Fitness is -loss_fine of the quantized, normalized, relay-selected decode.
PsoResult pso_optimize(const ChannelRealization &real, const SystemConfig &cfg, const PsoConfig &pso);

// ---------- flat dense network ----------

/// A single dense stack from the flattened channel set to the raw readout.
/// It has no weight sharing across users, so it is tied to one K.
class FlatDnn
{
public:
    FlatDnn(const SystemConfig &cfg, int hidden, int hidden_layers = 2);

    void init(std::uint64_t seed) { net.init(seed); }
    std::size_t size() const { return net.size(); }
    void fit_scale(const std::vector<ChannelRealization> &data, std::size_t max_samples = 256);

    ParamSet net;
    std::vector<double> scale; // one multiplier per channel family
    int M, N, L, J, I, K, hidden;
    int input_width() const;
    int output_width() const { return 4 * N * I + 2 * M * I * K + 2 * L * I * K; }
};

// Hidden width whose parameter count is closest to target.
int flat_dnn_hidden_for(const SystemConfig &cfg, std::size_t target_params, int hidden_layers = 2);

RMatrix flat_dnn_features(const ChannelRealization &real, const FlatDnn &dnn);
GnnOutput flat_dnn_forward(const ChannelRealization &real, const FlatDnn &dnn, const SystemConfig &cfg, Mode mode);
double flat_dnn_forward_backward(const ChannelRealization &real, const FlatDnn &dnn, const SystemConfig &cfg,
                                 const ReportLoss &loss, RVector &grad, GnnOutput *out = nullptr);
TrainHistory flat_dnn_train(FlatDnn &dnn, const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                            const TrainConfig &tc, const EpochCallback &on_epoch = {});

// ---------- exhaustive oracle ----------

struct OracleResult
{
    Strategy strategy;
    RateReport report;
    std::size_t enumerated = 0;
};

// Number of (theta1, theta2, assignment) tuples the oracle visits.
double oracle_budget(const SystemConfig &cfg);

// Best sum rate over every quantized phase pair and assignment with MRT
// beamformers. Refuses budgets above max_combinations.
OracleResult brute_force_oracle(const ChannelRealization &real, const SystemConfig &cfg, bool reverse_order = false,
                                double max_combinations = 1e6);

} // namespace risdf

#endif
