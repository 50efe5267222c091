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

#ifndef RISDF_CHANNEL_HPP
#define RISDF_CHANNEL_HPP

#include "risdf/config.hpp"
#include "risdf/types.hpp"

#include <string>
#include <vector>

namespace risdf
{

enum class FadingKind
{
    rayleigh,
    rician
};

// One draw of every channel in the network. Index conventions:
//   G_bs_ris[i]           M x N   BS -> RIS_i            (Rician)
//   H_bs_relay[j]         M x L   BS -> relay j          (Rayleigh)
//   h_bs_user[i][k]       M       BS -> user (i,k)       (Rayleigh)
//   h_ris_user[i][k]      N       RIS_i -> user (i,k)    (Rician)
//   H_ris_relay[i][j]     N x L   RIS_i -> relay j       (Rician)
//   h_relay_user[j][i][k] L       relay j -> user (i,k)  (Rayleigh)
// Entry [a, b] of a matrix is the coefficient from element a of the first
// node to element b of the second.
struct ChannelRealization
{
    std::vector<CMatrix> G_bs_ris;
    std::vector<CMatrix> H_bs_relay;
    std::vector<std::vector<CVector>> h_bs_user;
    std::vector<std::vector<CVector>> h_ris_user;
    std::vector<std::vector<CMatrix>> H_ris_relay;
    std::vector<std::vector<std::vector<CVector>>> h_relay_user;
    std::vector<std::vector<Point2>> user_pos;

    int M() const { return static_cast<int>(G_bs_ris.front().rows()); }
    int N() const { return static_cast<int>(G_bs_ris.front().cols()); }
    int L() const { return static_cast<int>(H_bs_relay.front().cols()); }
    int J() const { return static_cast<int>(H_bs_relay.size()); }
    int I() const { return static_cast<int>(G_bs_ris.size()); }
    int K() const { return static_cast<int>(h_bs_user.front().size()); }

    // Throws DomainError if any shape disagrees with cfg or any entry is non-finite.
    void validate(const SystemConfig &cfg) const;

    // Reorders the users of group i: new user k is old user perm[k].
    ChannelRealization permute_users(int group, const std::vector<int> &perm) const;

    bool operator==(const ChannelRealization &other) const;
};

// Fixed LoS angles for every Rician link of a dataset, uniform on [-pi/2, pi/2].
struct LosAngles
{
    std::vector<double> bs_ris_dep, bs_ris_arr;                // per i
    std::vector<std::vector<double>> ris_user;                 // [i][k]
    std::vector<std::vector<double>> ris_relay_dep, ris_relay_arr; // [i][j]

    static LosAngles draw(const SystemConfig &cfg, Rng &rng);
};

std::vector<std::vector<Point2>> sample_user_positions(const SystemConfig &cfg, const NetworkTopology &topo, Rng &rng);

// Element m equals sqrt(beta0) * exp(-j*pi*m*sin(angle)).
CVector steering_vector(double angle, int n_elements, double beta0);

// Rayleigh: CN(0,1) entries times d^(-alpha_nlos/2).
// Rician: sqrt(k/(k+1)) * LoS + sqrt(1/(k+1)) * scattered, both with per-entry
// power beta0 * d^(-alpha_los); the LoS part is a(dep) a(arr)^T for matrices
// and a(dep) for vectors (cols == 1).
CMatrix sample_channel(FadingKind kind, int rows, int cols, double dist, const SystemConfig &cfg,
                       double angle_dep, double angle_arr, Rng &rng);

ChannelRealization generate_realization(const SystemConfig &cfg, const NetworkTopology &topo, const LosAngles &angles,
                                        Rng &rng);

// Sample s uses sub-stream (seed, s + 1); angles use sub-stream (seed, 0).
std::vector<ChannelRealization> generate_dataset(const SystemConfig &cfg, const NetworkTopology &topo,
                                                 std::uint64_t seed, std::size_t count);

// ---------- persistence ----------

class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct DatasetDims
{
    int M = 0, N = 0, L = 0, J = 0, I = 0, K = 0;
};

// Binary layout (little-endian):
//   "RISDF01" (7 bytes), u32 version = 1, u32 M, N, L, J, I, K, u64 count,
//   then per sample, in declaration order of ChannelRealization, every array
//   as interleaved (re, im) f64 pairs; matrices column-major; user_pos as
//   (x, y) f64 pairs.
void save_dataset(const std::vector<ChannelRealization> &data, const std::string &path);
std::vector<ChannelRealization> load_dataset(const std::string &path);
// Also checks the header counts against cfg.
std::vector<ChannelRealization> load_dataset(const std::string &path, const SystemConfig &cfg);
DatasetDims read_dataset_dims(const std::string &path);

} // namespace risdf

#endif
