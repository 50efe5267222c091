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

#ifndef RISDF_PHY_HPP
#define RISDF_PHY_HPP

#include "risdf/channel.hpp"
#include "risdf/config.hpp"
#include "risdf/types.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace risdf
{

/// A complete decision tuple.
///
/// Streams are indexed group-major, u = i*K + k. Column u of G is the BS
/// beamformer of user u. Column u of F is the relay beamformer of user u and
/// is transmitted by relay assign[i]; relay j's beamforming matrix F_j is the
/// set of columns whose group is assigned to j (see relay_beamformers). This
/// keeps the joint relay power sum over j of tr(F_j F_j^H) equal to
/// ||F||_F^2 for every assignment.
struct Strategy
{
    CMatrix G;                   // M x U
    CMatrix F;                   // L x U
    std::vector<CVector> theta1; // I vectors of N
    std::vector<CVector> theta2; // I vectors of N
    std::vector<int> assign;     // I relay indices

    int num_users() const { return static_cast<int>(G.cols()); }
    CMatrix relay_beamformers(int j, int K) const;
};

/// Per-user and per-relay evaluation results. User tables are [i][k]; relay
/// tables are [j][u] and cover every stream, assigned or not.
struct RateReport
{
    std::vector<std::vector<double>> sinr_phase1;
    std::vector<std::vector<double>> sinr_phase2;
    std::vector<std::vector<double>> sinr_relay;
    std::vector<std::vector<double>> rate;
    double sum_rate = 0.0;
    std::vector<std::vector<bool>> satisfied_user;
    std::vector<bool> satisfied_group; // every user of the group meets rate_th_group[i]
    std::vector<std::vector<bool>> decode_ok;
    std::vector<int> assign;

    // SINR of user (i,k) at the relay serving its group.
    double assigned_relay_sinr(int i, int k) const;
    // Every stream decodes at the relay that serves it.
    bool all_assigned_decode_ok() const;
    double satisfaction_fraction() const;
    int I() const { return static_cast<int>(rate.size()); }
    int K() const { return rate.empty() ? 0 : static_cast<int>(rate.front().size()); }
};

// ---------- cascaded channels ----------

// G_bs_ris * diag(h_ris_user): column n is column n of G scaled by h[n].
CMatrix cascaded_bs_user(const CMatrix &G_bs_ris, const CVector &h_ris_user);

// BS -> RIS_i -> relay j cascade, one column per RIS element. Column n is the
// column-major vectorization of the L x M matrix H_ris_relay[n,:]^T G_bs_ris[:,n]^T,
// so reshaping (cascade * theta) to L x M gives the reflected part of the relay's
// receive channel.
CMatrix cascaded_bs_relay(const CMatrix &H_ris_relay, const CMatrix &G_bs_ris);

// Relay -> RIS_i -> user cascade C (L x N): column n = (row n of H_ris_relay)^T * h[n].
CMatrix cascaded_relay_user(const CMatrix &H_ris_relay, const CVector &h_ris_user);

// ---------- effective channels and SINRs ----------

// H_i(k) theta + h_bs_user[i][k]  (M-vector; received signal is h^T x).
CVector effective_channel_phase1(const ChannelRealization &real, const CVector &theta1_i, int i, int k);

// Relay j receive channel (L x M): H_bs_relay[j]^T plus the reflections of every RIS.
CMatrix relay_effective_channel(const ChannelRealization &real, const std::vector<CVector> &theta1, int j);

// C^i_{j,k} theta + h_relay_user[j][i][k]  (L-vector).
CVector effective_channel_phase2(const ChannelRealization &real, const CVector &theta2_i, int i, int k, int j);

double sinr_phase1(const ChannelRealization &real, const Strategy &s, int i, int k, const SystemConfig &cfg);
// Matched-filter decode SINR of stream (i,k) at relay j; 0 when the filter vanishes.
double relay_decode_sinr(const ChannelRealization &real, const Strategy &s, int j, int i, int k,
                         const SystemConfig &cfg);
double sinr_phase2(const ChannelRealization &real, const Strategy &s, int i, int k, const SystemConfig &cfg);

/// Caches every strategy-independent cascade of one realization so repeated
/// evaluations (relay enumeration, swarm search, training) stay cheap.
class LinkModel
{
public:
    LinkModel(const ChannelRealization &real, const SystemConfig &cfg);

    RateReport evaluate(const Strategy &s) const;

    /// Gradients of a scalar objective with respect to the strategy, given its
    /// derivatives with respect to each rate [i][k] and each assigned relay SINR
    /// [i][k]. Complex gradients use the d/dRe + j d/dIm convention.
    struct StrategyGrad
    {
        CMatrix G;
        CMatrix F;
        std::vector<CVector> theta1;
        std::vector<CVector> theta2;
    };
    StrategyGrad vjp(const Strategy &s, const std::vector<std::vector<double>> &rate_bar,
                     const std::vector<std::vector<double>> &relay_sinr_bar) const;

    const ChannelRealization &realization() const { return real_; }
    const SystemConfig &config() const { return cfg_; }

private:
    struct Forward;
    Forward run(const Strategy &s) const;

    const ChannelRealization &real_;
    SystemConfig cfg_;
    std::vector<CMatrix> bs_user_;                // [u] M x N
    std::vector<std::vector<CMatrix>> bs_relay_;  // [j][i] (L*M) x N
    std::vector<std::vector<CMatrix>> relay_user_; // [j][u] L x N
};

RateReport evaluate_strategy(const ChannelRealization &real, const Strategy &s, const SystemConfig &cfg);

// ---------- constraints ----------

struct ConstraintStatus
{
    bool satisfied = true;
    double slack = 0.0; // >= 0 when satisfied
};

struct ConstraintReport
{
    ConstraintStatus c1_bs_power;
    ConstraintStatus c2_relay_power;
    ConstraintStatus c3_decode;                   // min over assigned streams of sinr - threshold
    std::vector<std::vector<bool>> c3_per_user;   // [i][k]
    ConstraintStatus c4_rate;                     // min over users of rate - rate_th_user
    std::vector<std::vector<bool>> c4_per_user;   // [i][k]
    ConstraintStatus c5_phases;                   // -max distance to the nearest phase atom
    bool all() const;
};

ConstraintReport check_constraints(const ChannelRealization &real, const Strategy &s, const SystemConfig &cfg);

// ---------- relay selection ----------

// Selection order: decode-feasible beats infeasible, then larger sum rate; an
// exact tie keeps the earlier (lexicographically smaller) assignment.
bool report_preferred(const RateReport &candidate, const RateReport &incumbent);

// Calls fn(assign) for all J^I assignments in lexicographic order.
template <typename Fn>
void for_each_assignment(int I, int J, Fn &&fn)
{
    std::vector<int> a(static_cast<std::size_t>(I), 0);
    while (true)
    {
        fn(static_cast<const std::vector<int> &>(a));
        int pos = I - 1;
        while (pos >= 0 && a[static_cast<std::size_t>(pos)] == J - 1)
        {
            a[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++a[static_cast<std::size_t>(pos)];
    }
}

struct RelaySelection
{
    std::vector<int> assign;
    RateReport report;
};

RelaySelection select_relays(const LinkModel &model, const Strategy &s);
RelaySelection select_relays(const ChannelRealization &real, const Strategy &s, const SystemConfig &cfg);

// ---------- CSV ----------

void write_report_csv_header(std::ostream &out, bool with_method = false);
// Columns: [method,] sample_id, group, user, sinr1, sinr_relay, sinr2, rate, satisfied
void write_report_csv_rows(std::ostream &out, const RateReport &r, std::size_t sample_id,
                           const std::string &method = "");

} // namespace risdf

#endif
