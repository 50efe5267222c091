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


#ifndef RISDF_TRAINING_HPP
#define RISDF_TRAINING_HPP

#include "risdf/gnn.hpp"

#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace risdf
{

// Thrown when training hits a non-finite loss or gradient.
class TrainingError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class LossKind
{
    coarse,
    group,
    fine
};

LossKind parse_loss_kind(const std::string &name);
std::string to_string(LossKind kind);

struct TrainConfig
{
    LossKind loss_kind = LossKind::fine;
    double beta = 1000.0;
    double lambda = 1000.0;
    int epochs = 20;
    int batch_size = 64;
    double learning_rate = 1e-3;
    double lr_decay = 1e-6;
    std::uint64_t seed = 1;
    int checkpoint_every = 0; // epochs; 0 disables
    std::string checkpoint_dir;
    bool group_sum_penalty = false; // group loss on sum_k R_{i,k} instead of per user
    int early_stop_patience = 0;    // epochs without improvement; 0 disables
    double rate_margin = 0.0;       // added to every rate threshold inside the penalty

    void validate() const;
};

// Each loss optionally fills the derivatives with respect to rates and
// assigned relay SINRs. The decode penalty covers assigned streams only.
double loss_coarse(const RateReport &r, const SystemConfig &cfg, double beta, ReportGrad *grad = nullptr);
double loss_group(const RateReport &r, const SystemConfig &cfg, double beta, double lambda, bool group_sum = false,
                  ReportGrad *grad = nullptr);
double loss_fine(const RateReport &r, const SystemConfig &cfg, double beta, double lambda,
                 ReportGrad *grad = nullptr);
ReportLoss make_loss(const SystemConfig &cfg, const TrainConfig &tc);

struct EpochStats
{
    int epoch = 0;
    double loss = 0.0;
    double sum_rate = 0.0;
    double satisfaction_rate = 0.0;
};

struct TrainHistory
{
    std::vector<EpochStats> epochs;
    void write_csv(std::ostream &out) const;
    void save_csv(const std::string &path) const;
};

// Adam with time-based decay lr / (1 + decay * iteration).
class Adam
{
public:
    Adam(std::size_t size, double lr, double decay, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-7);
    void step(RVector &params, const RVector &grad);
    long iterations() const { return t_; }

private:
    double lr_, decay_, b1_, b2_, eps_;
    RVector m_, v_;
    long t_ = 0;
};

// Gradient of one sample's loss added into grad; returns the loss and the
// report the loss was computed on.
using SampleGradient = std::function<double(const ChannelRealization &, RVector &grad, RateReport &report)>;
using EpochCallback = std::function<void(const EpochStats &, const RVector &params)>;

// Mini-batch Adam over a flat parameter vector. Samples are visited in a
// seeded shuffle; per-sample gradients are summed in order, then averaged.
TrainHistory train_parameters(RVector &params, const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                              const TrainConfig &tc, const SampleGradient &sample_grad,
                              const EpochCallback &on_epoch = {});

// Trains the two-phase network; writes checkpoints when configured.
TrainHistory train(GnnParams &params, const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                   const TrainConfig &tc, const EpochCallback &on_epoch = {});

struct GradCheckResult
{
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    double analytic = 0.0; // at the worst coordinate
    double numeric = 0.0;
    std::size_t coordinates = 0;
};

// Central differences on a random subset of parameters. The relative error
// of a coordinate is |a - n| / max(|a|, |n|, floor).
GradCheckResult gradient_check(const GnnParams &params, const ChannelRealization &real, const SystemConfig &cfg,
                               const TrainConfig &tc, std::size_t coordinates = 64, std::uint64_t seed = 7,
                               double step = 1e-5, double floor = 1e-6);

// ---------- aggregate metrics ----------

struct EvalSummary
{
    std::size_t samples = 0;
    double mean_sum_rate = 0.0;
    double satisfaction_rate = 0.0; // over all (sample, user) pairs
    double decode_fraction = 0.0;   // samples whose assigned streams all decode
};

EvalSummary summarize(const std::vector<RateReport> &reports);

} // namespace risdf

#endif
