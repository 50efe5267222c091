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

#ifndef RISDF_CONFIG_HPP
#define RISDF_CONFIG_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace risdf
{

// Thrown for invalid parameters, shapes, or domain violations.
class DomainError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a configuration file or parameter set is inconsistent.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

using Point2 = std::array<double, 2>;

double distance(const Point2 &a, const Point2 &b);

// Scalar system parameters. Powers are in mW, noise variances linear, rates in bps/Hz.
struct SystemConfig
{
    int M = 8;  // BS antennas
    int N = 50; // elements per RIS
    int L = 4;  // antennas per relay
    int J = 2;  // relays
    int I = 2;  // groups (one RIS per group)
    int K = 4;  // users per group

    double P_bs_max = 20.0;
    double P_r_max = 20.0;
    double sigma_user_sq = 2e-5;
    double sigma_relay_sq = 2e-5;
    double gamma_relay_th = 0.01;
    int B = 2; // phase resolution bits

    std::vector<std::vector<double>> rate_th_user; // I x K
    std::vector<double> rate_th_group;             // I

    double rician_kappa = 10.0;
    double beta0 = 1.0; // path gain at d0 = 1 m on LoS links
    double alpha_nlos = 3.0;
    double alpha_los = 2.2;

    int D = 3;   // GNN update layers
    int q = 128; // GNN feature width

    std::uint64_t seed = 1;

    // Evaluation switches. Defaults follow the literal rate expression.
    bool noiseless_sinr = false;     // drop sigma^2 from the phase-1/phase-2 denominators
    bool half_duplex_prelog = false; // multiply rates by 1/2
    bool freeze_theta1 = false;      // phase-1 RIS fixed to all-ones
    bool freeze_theta2 = false;      // phase-2 RIS fixed to all-ones

    int num_users() const { return I * K; }

    // Throws ConfigError naming the first violated invariant.
    void validate() const;

    // Uniform thresholds for every user and group.
    void set_uniform_thresholds(double user_th, double group_th);

    // Changes K and resizes threshold tables; new users inherit their group's first threshold.
    void resize_users(int new_k);

    // Table III parameters with R_th = 1 bps/Hz for users and groups.
    static SystemConfig paper_defaults();

    // Desk-scale analog (M=4, N=8, L=2, J=2, I=2, K=2, B=2, q=32, D=2).
    static SystemConfig desk_defaults();
};

struct NetworkTopology
{
    Point2 bs_pos{0.0, 0.0};
    std::vector<Point2> ris_pos;
    std::vector<Point2> relay_pos;
    std::vector<Point2> group_center;
    double group_radius = 10.0;

    void validate(const SystemConfig &cfg) const;

    // Location presets Loc1..Loc4 (index 1..4) for two groups and two relays.
    static NetworkTopology location_preset(int index);

    // Loc1 truncated or padded to the counts in cfg.
    static NetworkTopology for_config(const SystemConfig &cfg, int preset = 1);
};

// Structured-text (JSON) config I/O. Nested keys "system" and "topology"
// mirror the field names above; scalar thresholds are broadcast.
struct ScenarioConfig
{
    SystemConfig system;
    NetworkTopology topology;
};

ScenarioConfig load_scenario(const std::string &path);
ScenarioConfig parse_scenario(const std::string &json_text);
std::string scenario_to_json(const ScenarioConfig &scenario);
void save_scenario(const ScenarioConfig &scenario, const std::string &path);

} // namespace risdf

#endif
