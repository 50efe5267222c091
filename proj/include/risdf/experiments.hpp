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


#ifndef RISDF_EXPERIMENTS_HPP
#define RISDF_EXPERIMENTS_HPP

#include "risdf/baselines.hpp"
#include "risdf/config.hpp"
#include "risdf/gnn.hpp"
#include "risdf/training.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace risdf
{

// Hex FNV-1a digest of the canonical scenario JSON.
std::string config_hash(const ScenarioConfig &scenario);

// ---------- datasets ----------

struct DataSplit
{
    std::vector<ChannelRealization> train;
    std::vector<ChannelRealization> test;
};

// One dataset of n_train + n_test draws (shared LoS angles), split in order.
DataSplit make_split(const ScenarioConfig &scenario, std::size_t n_train, std::size_t n_test, std::uint64_t seed);

struct DataManifest
{
    std::string config_hash;
    std::size_t num_train = 0;
    std::size_t num_test = 0;
    std::uint64_t seed = 0;
    std::string train_file = "train.bin";
    std::string test_file = "test.bin";
};

// Writes train.bin, test.bin, scenario.json and manifest.json into out_dir.
DataManifest gen_data(const ScenarioConfig &scenario, const std::string &out_dir, std::size_t n_train,
                      std::size_t n_test, std::uint64_t seed);
DataManifest read_manifest(const std::string &path);

// ---------- methods ----------

// jofd_tg, jogd_tg, jocd_tg, jofd_dnn, jofd_pso, jofd_random, oracle
const std::vector<std::string> &method_names();
void check_method(const std::string &method);

struct MethodOptions
{
    TrainConfig train;         // loss_kind is overridden per method
    PsoConfig pso;
    std::uint64_t seed = 1;    // weight init and random baseline
    int dnn_hidden = 0;        // 0: match the network's parameter count
    std::ostream *log = nullptr;
};

struct MethodResult
{
    std::string method;
    std::vector<RateReport> reports; // one per test sample, eval mode
    EvalSummary summary;
    std::optional<TrainHistory> history;
};

// Fresh weights, input scaling fitted to the training set, then training.
GnnParams train_gnn(const SystemConfig &cfg, const std::vector<ChannelRealization> &train_set, const TrainConfig &tc,
                    std::uint64_t init_seed, TrainHistory *history = nullptr, std::ostream *log = nullptr);
std::vector<RateReport> evaluate_gnn(const GnnParams &params, const std::vector<ChannelRealization> &data,
                                     const SystemConfig &cfg, Mode mode);

MethodResult run_method(const std::string &method, const SystemConfig &cfg, const DataSplit &data,
                        const MethodOptions &options);

// ---------- CSV ----------

// Per-user rows, optionally prefixed by a method column.
void write_metrics_csv(std::ostream &out, const std::vector<RateReport> &reports, const std::string &method = "");
// metric,value rows: samples, mean_sum_rate, satisfaction_rate, decode_fraction.
void write_summary_csv(std::ostream &out, const EvalSummary &summary);

// ---------- sweeps ----------

struct ExperimentSpec
{
    std::string name = "experiment";
    ScenarioConfig scenario;
    std::vector<std::string> methods;
    std::string sweep_variable; // empty: single point
    std::vector<double> sweep_values;
    std::size_t num_train = 2000;
    std::size_t num_test = 500;
    std::uint64_t seed = 1;
    std::string out_dir = "runs";
    MethodOptions options;

    void validate() const;
};

// Keys: name, config (path, relative to the spec file) or scenario (inline),
// methods, sweep {variable, values}, num_train, num_test, seed, out,
// train {loss, beta, lambda, epochs, batch_size, learning_rate, lr_decay},
// pso {particles, iterations, inertia, cognitive, social}.
ExperimentSpec parse_experiment_spec(const std::string &json_text, const std::string &base_dir = ".");
ExperimentSpec load_experiment_spec(const std::string &path);

// Sweep variables: lambda, beta, M, N, L, K, B, location.
ScenarioConfig apply_sweep_value(const ScenarioConfig &base, const std::string &variable, double value,
                                 MethodOptions &options);

struct SweepRow
{
    std::string method;
    std::string variable;
    double value = 0.0;
    EvalSummary summary;
};

// One metrics CSV per point (point_<n>.csv) plus combined.csv in out_dir.
std::vector<SweepRow> run_sweep(const ExperimentSpec &spec);
void write_combined_csv(std::ostream &out, const std::vector<SweepRow> &rows);

// ---------- cross-K ----------

struct CrossKRow
{
    int test_k = 0;
    double cross_sum_rate = 0.0; // trained at train_k
    double same_sum_rate = 0.0;  // trained at test_k
    double retention_pct = 0.0;
};

std::vector<CrossKRow> run_crossk(const ScenarioConfig &scenario, int train_k, const std::vector<int> &test_ks,
                                  std::size_t n_train, std::size_t n_test, std::uint64_t seed, const TrainConfig &tc,
                                  std::ostream *log = nullptr);
void write_crossk_csv(std::ostream &out, const std::vector<CrossKRow> &rows);

// ---------- report ----------

struct ReportResult
{
    std::size_t sweep_charts = 0;
    std::size_t history_charts = 0;
};

// Renders every combined.csv and history.csv under runs_dir to SVG and
// writes summary.csv. Output depends only on the CSV contents.
ReportResult render_report(const std::string &runs_dir, const std::string &out_dir);

} // namespace risdf

#endif
