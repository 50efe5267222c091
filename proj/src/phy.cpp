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

#include "risdf/phy.hpp"
#include "risdf/readout.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace risdf
{

namespace
{

double ratio_or_inf(double num, double den)
{
    if (den > 0.0)
        return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

void require_len(Eigen::Index got, Eigen::Index want, const char *what)
{
    if (got != want)
        throw DomainError(std::string("shape mismatch: ") + what + " has " + std::to_string(got) + ", expected " +
                          std::to_string(want));
}

void check_strategy_shape(const ChannelRealization &real, const Strategy &s)
{
    const int U = real.I() * real.K();
    require_len(s.G.rows(), real.M(), "G rows");
    require_len(s.G.cols(), U, "G cols");
    require_len(s.F.rows(), real.L(), "F rows");
    require_len(s.F.cols(), U, "F cols");
    require_len(static_cast<Eigen::Index>(s.theta1.size()), real.I(), "theta1 count");
    require_len(static_cast<Eigen::Index>(s.theta2.size()), real.I(), "theta2 count");
    require_len(static_cast<Eigen::Index>(s.assign.size()), real.I(), "assignment size");
    for (int i = 0; i < real.I(); ++i)
    {
        require_len(s.theta1[static_cast<std::size_t>(i)].size(), real.N(), "theta1 length");
        require_len(s.theta2[static_cast<std::size_t>(i)].size(), real.N(), "theta2 length");
        int a = s.assign[static_cast<std::size_t>(i)];
        if (a < 0 || a >= real.J())
            throw DomainError("relay assignment out of range");
    }
}

} // namespace

CMatrix Strategy::relay_beamformers(int j, int K) const
{
    std::vector<Eigen::Index> cols;
    for (std::size_t i = 0; i < assign.size(); ++i)
        if (assign[i] == j)
            for (int k = 0; k < K; ++k)
                cols.push_back(static_cast<Eigen::Index>(i) * K + k);
    CMatrix Fj(F.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        Fj.col(static_cast<Eigen::Index>(c)) = F.col(cols[c]);
    return Fj;
}

double RateReport::assigned_relay_sinr(int i, int k) const
{
    const int K_ = K();
    return sinr_relay[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]
                     [static_cast<std::size_t>(i * K_ + k)];
}

bool RateReport::all_assigned_decode_ok() const
{
    const int K_ = K();
    for (int i = 0; i < I(); ++i)
        for (int k = 0; k < K_; ++k)
            if (!decode_ok[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])]
                          [static_cast<std::size_t>(i * K_ + k)])
                return false;
    return true;
}

double RateReport::satisfaction_fraction() const
{
    std::size_t ok = 0, total = 0;
    for (const auto &row : satisfied_user)
        for (bool b : row)
        {
            ok += b ? 1 : 0;
            ++total;
        }
    return total == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(total);
}

// ---------- cascades ----------

CMatrix cascaded_bs_user(const CMatrix &G_bs_ris, const CVector &h_ris_user)
{
    require_len(h_ris_user.size(), G_bs_ris.cols(), "h_ris_user vs G_bs_ris columns");
    return G_bs_ris * h_ris_user.asDiagonal();
}

CMatrix cascaded_bs_relay(const CMatrix &H_ris_relay, const CMatrix &G_bs_ris)
{
    require_len(H_ris_relay.rows(), G_bs_ris.cols(), "H_ris_relay rows vs G_bs_ris columns");
    const Eigen::Index N = G_bs_ris.cols(), M = G_bs_ris.rows(), L = H_ris_relay.cols();
    CMatrix out(L * M, N);
    for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index m = 0; m < M; ++m)
            for (Eigen::Index l = 0; l < L; ++l)
                out(m * L + l, n) = H_ris_relay(n, l) * G_bs_ris(m, n);
    return out;
}

CMatrix cascaded_relay_user(const CMatrix &H_ris_relay, const CVector &h_ris_user)
{
    require_len(h_ris_user.size(), H_ris_relay.rows(), "h_ris_user vs H_ris_relay rows");
    return H_ris_relay.transpose() * h_ris_user.asDiagonal();
}

CVector effective_channel_phase1(const ChannelRealization &real, const CVector &theta1_i, int i, int k)
{
    const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
    require_len(theta1_i.size(), real.N(), "theta1 length");
    return cascaded_bs_user(real.G_bs_ris.at(si), real.h_ris_user.at(si).at(sk)) * theta1_i + real.h_bs_user[si][sk];
}

CMatrix relay_effective_channel(const ChannelRealization &real, const std::vector<CVector> &theta1, int j)
{
    const auto sj = static_cast<std::size_t>(j);
    const Eigen::Index L = real.L(), M = real.M();
    CMatrix E = real.H_bs_relay.at(sj).transpose();
    for (int i = 0; i < real.I(); ++i)
    {
        const auto si = static_cast<std::size_t>(i);
        require_len(theta1.at(si).size(), real.N(), "theta1 length");
        CVector v = cascaded_bs_relay(real.H_ris_relay[si][sj], real.G_bs_ris[si]) * theta1[si];
        E += Eigen::Map<const CMatrix>(v.data(), L, M);
    }
    return E;
}

CVector effective_channel_phase2(const ChannelRealization &real, const CVector &theta2_i, int i, int k, int j)
{
    const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k), sj = static_cast<std::size_t>(j);
    require_len(theta2_i.size(), real.N(), "theta2 length");
    return cascaded_relay_user(real.H_ris_relay.at(si).at(sj), real.h_ris_user.at(si).at(sk)) * theta2_i +
           real.h_relay_user.at(sj).at(si).at(sk);
}

double sinr_phase1(const ChannelRealization &real, const Strategy &s, int i, int k, const SystemConfig &cfg)
{
    check_strategy_shape(real, s);
    const int u = i * real.K() + k;
    CVector h = effective_channel_phase1(real, s.theta1.at(static_cast<std::size_t>(i)), i, k);
    double signal = 0.0, interference = 0.0;
    for (int v = 0; v < s.G.cols(); ++v)
    {
        double p = std::norm((h.transpose() * s.G.col(v)).value());
        (v == u ? signal : interference) += p;
    }
    return ratio_or_inf(signal, interference + (cfg.noiseless_sinr ? 0.0 : cfg.sigma_user_sq));
}

double relay_decode_sinr(const ChannelRealization &real, const Strategy &s, int j, int i, int k,
                         const SystemConfig &cfg)
{
    check_strategy_shape(real, s);
    const int u = i * real.K() + k;
    CMatrix E = relay_effective_channel(real, s.theta1, j);
    CMatrix alpha = E * s.G; // L x U
    const CVector a = alpha.col(u);
    const double n2 = a.squaredNorm();
    if (n2 == 0.0)
        return 0.0;
    double interference = 0.0;
    for (int v = 0; v < alpha.cols(); ++v)
        if (v != u)
            interference += std::norm(a.dot(alpha.col(v))); // dot conjugates a
    return n2 * n2 / (interference + cfg.sigma_relay_sq * n2);
}

double sinr_phase2(const ChannelRealization &real, const Strategy &s, int i, int k, const SystemConfig &cfg)
{
    check_strategy_shape(real, s);
    const int K = real.K();
    const int u = i * K + k;
    double signal = 0.0, interference = 0.0;
    for (int v = 0; v < s.F.cols(); ++v)
    {
        const int j = s.assign[static_cast<std::size_t>(v / K)];
        CVector h = effective_channel_phase2(real, s.theta2.at(static_cast<std::size_t>(i)), i, k, j);
        double p = std::norm((h.transpose() * s.F.col(v)).value());
        (v == u ? signal : interference) += p;
    }
    return ratio_or_inf(signal, interference + (cfg.noiseless_sinr ? 0.0 : cfg.sigma_user_sq));
}

// ---------- LinkModel ----------

LinkModel::LinkModel(const ChannelRealization &real, const SystemConfig &cfg) : real_(real), cfg_(cfg)
{
    real.validate(cfg);
    const int I = cfg.I, J = cfg.J, K = cfg.K;
    for (int i = 0; i < I; ++i)
        for (int k = 0; k < K; ++k)
            bs_user_.push_back(cascaded_bs_user(real.G_bs_ris[static_cast<std::size_t>(i)],
                                                real.h_ris_user[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]));
    bs_relay_.resize(static_cast<std::size_t>(J));
    relay_user_.resize(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j)
    {
        const auto sj = static_cast<std::size_t>(j);
        for (int i = 0; i < I; ++i)
        {
            const auto si = static_cast<std::size_t>(i);
            bs_relay_[sj].push_back(cascaded_bs_relay(real.H_ris_relay[si][sj], real.G_bs_ris[si]));
            for (int k = 0; k < K; ++k)
                relay_user_[sj].push_back(
                    cascaded_relay_user(real.H_ris_relay[si][sj], real.h_ris_user[si][static_cast<std::size_t>(k)]));
        }
    }
}

struct LinkModel::Forward
{
    std::vector<CVector> h1;                // [u] M
    CMatrix z1;                             // (u, v) = h1_u^T g_v
    std::vector<CMatrix> E;                 // [j] L x M
    std::vector<CMatrix> alpha;             // [j] L x U
    std::vector<CMatrix> gram;              // [j] U x U, alpha^H alpha
    std::vector<std::vector<CVector>> h2;   // [u][j] L
    CMatrix z2;                             // (u, v) = h2_{u, a(v)}^T f_v
    std::vector<double> s1, d1, s2, d2;     // signal / denominator per user
    std::vector<double> gamma1, gamma2, rate;
    std::vector<std::vector<double>> relay; // [j][u]
    std::vector<std::vector<double>> relay_den, relay_n2;
    double prelog = 1.0;
};

LinkModel::Forward LinkModel::run(const Strategy &s) const
{
    check_strategy_shape(real_, s);
    const int I = cfg_.I, J = cfg_.J, K = cfg_.K, U = I * K;
    const Eigen::Index L = cfg_.L, M = cfg_.M;
    const double noise = cfg_.noiseless_sinr ? 0.0 : cfg_.sigma_user_sq;
    Forward f;
    f.prelog = cfg_.half_duplex_prelog ? 0.5 : 1.0;

    f.h1.resize(static_cast<std::size_t>(U));
    for (int u = 0; u < U; ++u)
    {
        const int i = u / K, k = u % K;
        f.h1[static_cast<std::size_t>(u)] =
            bs_user_[static_cast<std::size_t>(u)] * s.theta1[static_cast<std::size_t>(i)] +
            real_.h_bs_user[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    f.z1.resize(U, U);
    for (int u = 0; u < U; ++u)
        f.z1.row(u) = f.h1[static_cast<std::size_t>(u)].transpose() * s.G;

    for (int j = 0; j < J; ++j)
    {
        const auto sj = static_cast<std::size_t>(j);
        CMatrix E = real_.H_bs_relay[sj].transpose();
        for (int i = 0; i < I; ++i)
        {
            CVector v = bs_relay_[sj][static_cast<std::size_t>(i)] * s.theta1[static_cast<std::size_t>(i)];
            E += Eigen::Map<const CMatrix>(v.data(), L, M);
        }
        CMatrix alpha = E * s.G;
        f.gram.push_back(alpha.adjoint() * alpha);
        f.E.push_back(std::move(E));
        f.alpha.push_back(std::move(alpha));
    }

    f.h2.assign(static_cast<std::size_t>(U), std::vector<CVector>(static_cast<std::size_t>(J)));
    for (int u = 0; u < U; ++u)
    {
        const int i = u / K, k = u % K;
        for (int j = 0; j < J; ++j)
            f.h2[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)] =
                relay_user_[static_cast<std::size_t>(j)][static_cast<std::size_t>(u)] *
                    s.theta2[static_cast<std::size_t>(i)] +
                real_.h_relay_user[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    f.z2.resize(U, U);
    for (int u = 0; u < U; ++u)
        for (int v = 0; v < U; ++v)
        {
            const auto jv = static_cast<std::size_t>(s.assign[static_cast<std::size_t>(v / K)]);
            f.z2(u, v) = (f.h2[static_cast<std::size_t>(u)][jv].transpose() * s.F.col(v))(0);
        }

    const auto sU = static_cast<std::size_t>(U);
    f.s1.assign(sU, 0.0);
    f.d1.assign(sU, noise);
    f.s2.assign(sU, 0.0);
    f.d2.assign(sU, noise);
    f.gamma1.resize(sU);
    f.gamma2.resize(sU);
    f.rate.resize(sU);
    for (int u = 0; u < U; ++u)
    {
        const auto su = static_cast<std::size_t>(u);
        for (int v = 0; v < U; ++v)
        {
            double p1 = std::norm(f.z1(u, v)), p2 = std::norm(f.z2(u, v));
            if (v == u)
            {
                f.s1[su] = p1;
                f.s2[su] = p2;
            }
            else
            {
                f.d1[su] += p1;
                f.d2[su] += p2;
            }
        }
        f.gamma1[su] = ratio_or_inf(f.s1[su], f.d1[su]);
        f.gamma2[su] = ratio_or_inf(f.s2[su], f.d2[su]);
        f.rate[su] = f.prelog * std::log2(1.0 + f.gamma1[su] + f.gamma2[su]);
    }

    f.relay.assign(static_cast<std::size_t>(J), std::vector<double>(sU, 0.0));
    f.relay_den = f.relay;
    f.relay_n2 = f.relay;
    for (int j = 0; j < J; ++j)
    {
        const auto sj = static_cast<std::size_t>(j);
        const CMatrix &gm = f.gram[sj];
        for (int u = 0; u < U; ++u)
        {
            const auto su = static_cast<std::size_t>(u);
            const double n2 = gm(u, u).real();
            double den = cfg_.sigma_relay_sq * n2;
            for (int v = 0; v < U; ++v)
                if (v != u)
                    den += std::norm(gm(u, v));
            f.relay_n2[sj][su] = n2;
            f.relay_den[sj][su] = den;
            f.relay[sj][su] = n2 > 0.0 ? n2 * n2 / den : 0.0;
        }
    }
    return f;
}

RateReport LinkModel::evaluate(const Strategy &s) const
{
    const Forward f = run(s);
    const int I = cfg_.I, J = cfg_.J, K = cfg_.K;
    RateReport r;
    r.assign = s.assign;
    r.sinr_phase1.assign(static_cast<std::size_t>(I), std::vector<double>(static_cast<std::size_t>(K)));
    r.sinr_phase2 = r.sinr_phase1;
    r.rate = r.sinr_phase1;
    r.satisfied_user.assign(static_cast<std::size_t>(I), std::vector<bool>(static_cast<std::size_t>(K)));
    r.satisfied_group.assign(static_cast<std::size_t>(I), true);
    r.sum_rate = 0.0;
    for (int i = 0; i < I; ++i)
        for (int k = 0; k < K; ++k)
        {
            const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
            const auto su = static_cast<std::size_t>(i * K + k);
            r.sinr_phase1[si][sk] = f.gamma1[su];
            r.sinr_phase2[si][sk] = f.gamma2[su];
            r.rate[si][sk] = f.rate[su];
            r.sum_rate += f.rate[su];
            r.satisfied_user[si][sk] = f.rate[su] >= cfg_.rate_th_user[si][sk];
            if (f.rate[su] < cfg_.rate_th_group[si])
                r.satisfied_group[si] = false;
        }
    r.sinr_relay = f.relay;
    r.decode_ok.assign(static_cast<std::size_t>(J), std::vector<bool>(static_cast<std::size_t>(I * K)));
    for (int j = 0; j < J; ++j)
        for (int u = 0; u < I * K; ++u)
            r.decode_ok[static_cast<std::size_t>(j)][static_cast<std::size_t>(u)] =
                f.relay[static_cast<std::size_t>(j)][static_cast<std::size_t>(u)] >= cfg_.gamma_relay_th;
    return r;
}

LinkModel::StrategyGrad LinkModel::vjp(const Strategy &s, const std::vector<std::vector<double>> &rate_bar,
                                       const std::vector<std::vector<double>> &relay_sinr_bar) const
{
    const Forward f = run(s);
    const int I = cfg_.I, J = cfg_.J, K = cfg_.K, U = I * K;
    const Eigen::Index L = cfg_.L, M = cfg_.M, N = cfg_.N;

    StrategyGrad g;
    g.G = CMatrix::Zero(M, U);
    g.F = CMatrix::Zero(L, U);
    g.theta1.assign(static_cast<std::size_t>(I), CVector::Zero(N));
    g.theta2.assign(static_cast<std::size_t>(I), CVector::Zero(N));

    // Upstream derivatives with respect to |z|^2 terms.
    CMatrix z1_bar = CMatrix::Zero(U, U), z2_bar = CMatrix::Zero(U, U);
    for (int u = 0; u < U; ++u)
    {
        const auto su = static_cast<std::size_t>(u);
        const double rb = rate_bar[static_cast<std::size_t>(u / K)][static_cast<std::size_t>(u % K)];
        if (rb == 0.0)
            continue;
        const double gamma = f.gamma1[su] + f.gamma2[su];
        const double gamma_bar = rb * f.prelog / ((1.0 + gamma) * std::log(2.0));
        // gamma = s / d: s_bar = gamma_bar / d, d_bar = -gamma_bar * gamma / d
        const double s1_bar = gamma_bar / f.d1[su], d1_bar = -gamma_bar * f.gamma1[su] / f.d1[su];
        const double s2_bar = gamma_bar / f.d2[su], d2_bar = -gamma_bar * f.gamma2[su] / f.d2[su];
        for (int v = 0; v < U; ++v)
        {
            z1_bar(u, v) = 2.0 * f.z1(u, v) * (v == u ? s1_bar : d1_bar);
            z2_bar(u, v) = 2.0 * f.z2(u, v) * (v == u ? s2_bar : d2_bar);
        }
    }

    // Phase 1: z1(u,v) = h1_u^T g_v, h1_u = A_u theta1_i + d_u.
    for (int u = 0; u < U; ++u)
    {
        const auto su = static_cast<std::size_t>(u);
        CVector h1_bar = CVector::Zero(M);
        for (int v = 0; v < U; ++v)
        {
            const cdouble zb = z1_bar(u, v);
            if (zb == cdouble(0.0))
                continue;
            g.G.col(v) += f.h1[su].conjugate() * zb;
            h1_bar += s.G.col(v).conjugate() * zb;
        }
        g.theta1[static_cast<std::size_t>(u / K)] += bs_user_[su].adjoint() * h1_bar;
    }

    // Phase 2: z2(u,v) = h2_{u,a(v)}^T f_v, h2_{u,j} = C_{j,u} theta2_i + e_{u,j}.
    for (int u = 0; u < U; ++u)
    {
        const auto su = static_cast<std::size_t>(u);
        for (int v = 0; v < U; ++v)
        {
            const cdouble zb = z2_bar(u, v);
            if (zb == cdouble(0.0))
                continue;
            const auto jv = static_cast<std::size_t>(s.assign[static_cast<std::size_t>(v / K)]);
            g.F.col(v) += f.h2[su][jv].conjugate() * zb;
            CVector h2_bar = s.F.col(v).conjugate() * zb;
            g.theta2[static_cast<std::size_t>(u / K)] += relay_user_[jv][su].adjoint() * h2_bar;
        }
    }

    // Relay decode: gamma = n2^2 / Q, Q = sum_{v != u} |c_v|^2 + sigma_R^2 n2,
    // n2 = ||a_u||^2, c_v = a_u^H a_v, a = E_j G.
    std::vector<CMatrix> alpha_bar(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j)
        alpha_bar[static_cast<std::size_t>(j)] = CMatrix::Zero(L, U);
    for (int u = 0; u < U; ++u)
    {
        const int i = u / K;
        const double gb = relay_sinr_bar[static_cast<std::size_t>(i)][static_cast<std::size_t>(u % K)];
        if (gb == 0.0)
            continue;
        const auto j = static_cast<std::size_t>(s.assign[static_cast<std::size_t>(i)]);
        const auto su = static_cast<std::size_t>(u);
        const double n2 = f.relay_n2[j][su];
        if (n2 == 0.0)
            continue; // decode SINR pinned at 0
        const double Q = f.relay_den[j][su];
        const double gamma = f.relay[j][su];
        const double n2_bar = gb * (2.0 * n2 - gamma * cfg_.sigma_relay_sq) / Q;
        const double q_bar = -gb * gamma / Q;
        const CMatrix &alpha = f.alpha[j];
        CMatrix &ab = alpha_bar[j];
        ab.col(u) += 2.0 * n2_bar * alpha.col(u);
        for (int v = 0; v < U; ++v)
        {
            if (v == u)
                continue;
            const cdouble c = f.gram[j](u, v);
            const cdouble c_bar = 2.0 * c * q_bar;
            ab.col(v) += alpha.col(u) * c_bar;
            ab.col(u) += std::conj(c_bar) * alpha.col(v);
        }
    }
    for (int j = 0; j < J; ++j)
    {
        const auto sj = static_cast<std::size_t>(j);
        const CMatrix &ab = alpha_bar[sj];
        if (ab.isZero(0.0))
            continue;
        g.G += f.E[sj].adjoint() * ab;
        CMatrix E_bar = ab * s.G.adjoint(); // L x M
        Eigen::Map<const CVector> e_bar_vec(E_bar.data(), L * M);
        for (int i = 0; i < I; ++i)
            g.theta1[static_cast<std::size_t>(i)] += bs_relay_[sj][static_cast<std::size_t>(i)].adjoint() * e_bar_vec;
    }
    return g;
}

RateReport evaluate_strategy(const ChannelRealization &real, const Strategy &s, const SystemConfig &cfg)
{
    return LinkModel(real, cfg).evaluate(s);
}

// ---------- constraints ----------

bool ConstraintReport::all() const
{
    return c1_bs_power.satisfied && c2_relay_power.satisfied && c3_decode.satisfied && c4_rate.satisfied &&
           c5_phases.satisfied;
}

ConstraintReport check_constraints(const ChannelRealization &real, const Strategy &s, const SystemConfig &cfg)
{
    constexpr double rel_tol = 1e-9;
    ConstraintReport c;
    const double p_bs = s.G.squaredNorm();
    c.c1_bs_power.slack = cfg.P_bs_max - p_bs;
    c.c1_bs_power.satisfied = p_bs <= cfg.P_bs_max * (1.0 + rel_tol);

    double p_r = 0.0;
    for (int j = 0; j < cfg.J; ++j)
        p_r += s.relay_beamformers(j, cfg.K).squaredNorm();
    c.c2_relay_power.slack = cfg.P_r_max - p_r;
    c.c2_relay_power.satisfied = p_r <= cfg.P_r_max * (1.0 + rel_tol);

    const RateReport r = evaluate_strategy(real, s, cfg);
    c.c3_per_user.assign(static_cast<std::size_t>(cfg.I), std::vector<bool>(static_cast<std::size_t>(cfg.K)));
    c.c4_per_user = c.c3_per_user;
    c.c3_decode.slack = std::numeric_limits<double>::infinity();
    c.c4_rate.slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.I; ++i)
        for (int k = 0; k < cfg.K; ++k)
        {
            const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
            const double d_slack = r.assigned_relay_sinr(i, k) - cfg.gamma_relay_th;
            const double r_slack = r.rate[si][sk] - cfg.rate_th_user[si][sk];
            c.c3_per_user[si][sk] = d_slack >= 0.0;
            c.c4_per_user[si][sk] = r_slack >= 0.0;
            c.c3_decode.slack = std::min(c.c3_decode.slack, d_slack);
            c.c4_rate.slack = std::min(c.c4_rate.slack, r_slack);
        }
    c.c3_decode.satisfied = c.c3_decode.slack >= 0.0;
    c.c4_rate.satisfied = c.c4_rate.slack >= 0.0;

    double worst = 0.0;
    for (const auto *set : {&s.theta1, &s.theta2})
        for (const auto &theta : *set)
            for (Eigen::Index n = 0; n < theta.size(); ++n)
                worst = std::max(worst, distance_to_phase_set(theta(n), cfg.B));
    c.c5_phases.slack = -worst;
    c.c5_phases.satisfied = worst <= 1e-9;
    return c;
}

// ---------- relay selection ----------

bool report_preferred(const RateReport &candidate, const RateReport &incumbent)
{
    const bool a = candidate.all_assigned_decode_ok(), b = incumbent.all_assigned_decode_ok();
    if (a != b)
        return a;
    return candidate.sum_rate > incumbent.sum_rate;
}

RelaySelection select_relays(const LinkModel &model, const Strategy &s)
{
    const SystemConfig &cfg = model.config();
    Strategy trial = s;
    RelaySelection best;
    bool have = false;
    for_each_assignment(cfg.I, cfg.J,
                        [&](const std::vector<int> &a)
                        {
                            trial.assign = a;
                            RateReport r = model.evaluate(trial);
                            if (!have || report_preferred(r, best.report))
                            {
                                best.assign = a;
                                best.report = std::move(r);
                                have = true;
                            }
                        });
    return best;
}

RelaySelection select_relays(const ChannelRealization &real, const Strategy &s, const SystemConfig &cfg)
{
    return select_relays(LinkModel(real, cfg), s);
}

// ---------- CSV ----------

void write_report_csv_header(std::ostream &out, bool with_method)
{
    if (with_method)
        out << "method,";
    out << "sample_id,group,user,sinr1,sinr_relay,sinr2,rate,satisfied\n";
}

void write_report_csv_rows(std::ostream &out, const RateReport &r, std::size_t sample_id, const std::string &method)
{
    out << std::setprecision(10);
    for (int i = 0; i < r.I(); ++i)
        for (int k = 0; k < r.K(); ++k)
        {
            const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
            if (!method.empty())
                out << method << ',';
            out << sample_id << ',' << i << ',' << k << ',' << r.sinr_phase1[si][sk] << ','
                << r.assigned_relay_sinr(i, k) << ',' << r.sinr_phase2[si][sk] << ',' << r.rate[si][sk] << ','
                << (r.satisfied_user[si][sk] ? 1 : 0) << '\n';
        }
}

} // namespace risdf
