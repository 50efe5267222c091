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

#include "risdf/channel.hpp"

#include <cmath>
#include <numbers>

namespace risdf
{

namespace
{

bool all_finite(const CMatrix &m)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag()))
                return false;
    return true;
}

void check_shape(const CMatrix &m, int rows, int cols, const std::string &what)
{
    if (m.rows() != rows || m.cols() != cols)
        throw DomainError("channel shape mismatch in " + what + ": got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    if (!all_finite(m))
        throw DomainError("non-finite channel entry in " + what);
}

} // namespace

void ChannelRealization::validate(const SystemConfig &cfg) const
{
    const auto I = static_cast<std::size_t>(cfg.I), J = static_cast<std::size_t>(cfg.J),
               K = static_cast<std::size_t>(cfg.K);
    if (G_bs_ris.size() != I || H_bs_relay.size() != J || h_bs_user.size() != I || h_ris_user.size() != I ||
        H_ris_relay.size() != I || h_relay_user.size() != J || user_pos.size() != I)
        throw DomainError("channel realization group/relay counts disagree with config");
    for (std::size_t i = 0; i < I; ++i)
    {
        check_shape(G_bs_ris[i], cfg.M, cfg.N, "G_bs_ris");
        if (h_bs_user[i].size() != K || h_ris_user[i].size() != K || user_pos[i].size() != K ||
            H_ris_relay[i].size() != J)
            throw DomainError("channel realization user counts disagree with config");
        for (std::size_t k = 0; k < K; ++k)
        {
            check_shape(h_bs_user[i][k], cfg.M, 1, "h_bs_user");
            check_shape(h_ris_user[i][k], cfg.N, 1, "h_ris_user");
        }
        for (std::size_t j = 0; j < J; ++j)
            check_shape(H_ris_relay[i][j], cfg.N, cfg.L, "H_ris_relay");
    }
    for (std::size_t j = 0; j < J; ++j)
    {
        check_shape(H_bs_relay[j], cfg.M, cfg.L, "H_bs_relay");
        if (h_relay_user[j].size() != I)
            throw DomainError("h_relay_user group count disagrees with config");
        for (std::size_t i = 0; i < I; ++i)
        {
            if (h_relay_user[j][i].size() != K)
                throw DomainError("h_relay_user user count disagrees with config");
            for (std::size_t k = 0; k < K; ++k)
                check_shape(h_relay_user[j][i][k], cfg.L, 1, "h_relay_user");
        }
    }
}

ChannelRealization ChannelRealization::permute_users(int group, const std::vector<int> &perm) const
{
    const auto g = static_cast<std::size_t>(group);
    if (perm.size() != h_bs_user.at(g).size())
        throw DomainError("permutation length must equal K");
    ChannelRealization out = *this;
    for (std::size_t k = 0; k < perm.size(); ++k)
    {
        const auto src = static_cast<std::size_t>(perm[k]);
        out.h_bs_user[g][k] = h_bs_user[g].at(src);
        out.h_ris_user[g][k] = h_ris_user[g].at(src);
        out.user_pos[g][k] = user_pos[g].at(src);
        for (std::size_t j = 0; j < h_relay_user.size(); ++j)
            out.h_relay_user[j][g][k] = h_relay_user[j][g].at(src);
    }
    return out;
}

bool ChannelRealization::operator==(const ChannelRealization &o) const
{
    return G_bs_ris == o.G_bs_ris && H_bs_relay == o.H_bs_relay && h_bs_user == o.h_bs_user &&
           h_ris_user == o.h_ris_user && H_ris_relay == o.H_ris_relay && h_relay_user == o.h_relay_user &&
           user_pos == o.user_pos;
}

LosAngles LosAngles::draw(const SystemConfig &cfg, Rng &rng)
{
    constexpr double half_pi = std::numbers::pi / 2.0;
    LosAngles a;
    for (int i = 0; i < cfg.I; ++i)
    {
        a.bs_ris_dep.push_back(rng.uniform(-half_pi, half_pi));
        a.bs_ris_arr.push_back(rng.uniform(-half_pi, half_pi));
        std::vector<double> users;
        for (int k = 0; k < cfg.K; ++k)
            users.push_back(rng.uniform(-half_pi, half_pi));
        a.ris_user.push_back(users);
        std::vector<double> dep, arr;
        for (int j = 0; j < cfg.J; ++j)
        {
            dep.push_back(rng.uniform(-half_pi, half_pi));
            arr.push_back(rng.uniform(-half_pi, half_pi));
        }
        a.ris_relay_dep.push_back(dep);
        a.ris_relay_arr.push_back(arr);
    }
    return a;
}

std::vector<std::vector<Point2>> sample_user_positions(const SystemConfig &cfg, const NetworkTopology &topo, Rng &rng)
{
    if (!(topo.group_radius >= 0.0))
        throw DomainError("group_radius must be non-negative");
    std::vector<std::vector<Point2>> pos(static_cast<std::size_t>(cfg.I));
    for (int i = 0; i < cfg.I; ++i)
    {
        const Point2 c = topo.group_center.at(static_cast<std::size_t>(i));
        for (int k = 0; k < cfg.K; ++k)
        {
            // sqrt of a uniform radius fraction gives a uniform density over the disk
            double r = topo.group_radius * std::sqrt(rng.uniform());
            double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            pos[static_cast<std::size_t>(i)].push_back({c[0] + r * std::cos(phi), c[1] + r * std::sin(phi)});
        }
    }
    return pos;
}

CVector steering_vector(double angle, int n_elements, double beta0)
{
    if (n_elements < 1)
        throw DomainError("steering_vector: n_elements must be >= 1");
    CVector a(n_elements);
    const double amp = std::sqrt(beta0);
    const double s = std::sin(angle);
    for (int m = 0; m < n_elements; ++m)
        a(m) = std::polar(amp, -std::numbers::pi * m * s);
    return a;
}

CMatrix sample_channel(FadingKind kind, int rows, int cols, double dist, const SystemConfig &cfg, double angle_dep,
                       double angle_arr, Rng &rng)
{
    if (!(dist > 0.0))
        throw DomainError("sample_channel: distance must be > 0 (got " + std::to_string(dist) + ")");
    if (rows < 1 || cols < 1)
        throw DomainError("sample_channel: dimensions must be >= 1");

    CMatrix h(rows, cols);
    if (kind == FadingKind::rayleigh)
    {
        const double scale = std::pow(dist, -cfg.alpha_nlos / 2.0);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r)
                h(r, c) = scale * rng.complex_normal();
        return h;
    }

    const double kappa = cfg.rician_kappa;
    const double scale = std::pow(dist, -cfg.alpha_los / 2.0) * std::sqrt(cfg.beta0);
    const double w_los = std::sqrt(kappa / (kappa + 1.0));
    const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
    CVector dep = steering_vector(angle_dep, rows, 1.0);
    CVector arr = cols > 1 ? steering_vector(angle_arr, cols, 1.0) : CVector::Ones(1);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            h(r, c) = scale * (w_los * dep(r) * arr(c) + w_nlos * rng.complex_normal());
    return h;
}

ChannelRealization generate_realization(const SystemConfig &cfg, const NetworkTopology &topo, const LosAngles &ang,
                                        Rng &rng)
{
    const auto I = static_cast<std::size_t>(cfg.I), J = static_cast<std::size_t>(cfg.J),
               K = static_cast<std::size_t>(cfg.K);
    ChannelRealization r;
    r.user_pos = sample_user_positions(cfg, topo, rng);

    for (std::size_t i = 0; i < I; ++i)
        r.G_bs_ris.push_back(sample_channel(FadingKind::rician, cfg.M, cfg.N, distance(topo.bs_pos, topo.ris_pos[i]),
                                            cfg, ang.bs_ris_dep[i], ang.bs_ris_arr[i], rng));
    for (std::size_t j = 0; j < J; ++j)
        r.H_bs_relay.push_back(sample_channel(FadingKind::rayleigh, cfg.M, cfg.L,
                                              distance(topo.bs_pos, topo.relay_pos[j]), cfg, 0.0, 0.0, rng));
    r.h_bs_user.resize(I);
    r.h_ris_user.resize(I);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < K; ++k)
        {
            r.h_bs_user[i].push_back(sample_channel(FadingKind::rayleigh, cfg.M, 1,
                                                    distance(topo.bs_pos, r.user_pos[i][k]), cfg, 0.0, 0.0, rng));
        }
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < K; ++k)
        {
            r.h_ris_user[i].push_back(sample_channel(FadingKind::rician, cfg.N, 1,
                                                     distance(topo.ris_pos[i], r.user_pos[i][k]), cfg,
                                                     ang.ris_user[i][k], 0.0, rng));
        }
    r.H_ris_relay.resize(I);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            r.H_ris_relay[i].push_back(sample_channel(FadingKind::rician, cfg.N, cfg.L,
                                                      distance(topo.ris_pos[i], topo.relay_pos[j]), cfg,
                                                      ang.ris_relay_dep[i][j], ang.ris_relay_arr[i][j], rng));
    r.h_relay_user.assign(J, std::vector<std::vector<CVector>>(I));
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t k = 0; k < K; ++k)
                r.h_relay_user[j][i].push_back(sample_channel(FadingKind::rayleigh, cfg.L, 1,
                                                              distance(topo.relay_pos[j], r.user_pos[i][k]), cfg,
                                                              0.0, 0.0, rng));
    return r;
}

std::vector<ChannelRealization> generate_dataset(const SystemConfig &cfg, const NetworkTopology &topo,
                                                 std::uint64_t seed, std::size_t count)
{
    cfg.validate();
    topo.validate(cfg);
    Rng angle_rng(seed, 0);
    const LosAngles angles = LosAngles::draw(cfg, angle_rng);
    std::vector<ChannelRealization> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s)
    {
        Rng rng(seed, s + 1);
        out.push_back(generate_realization(cfg, topo, angles, rng));
    }
    return out;
}

} // namespace risdf
