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


#include "risdf/readout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace risdf
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

CMatrix complex_from_split(const Eigen::MatrixXd &x)
{
    const Eigen::Index h = x.rows() / 2;
    CMatrix out(h, x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c)
        for (Eigen::Index r = 0; r < h; ++r)
            out(r, c) = {x(r, c), x(h + r, c)};
    return out;
}

Eigen::MatrixXd split_from_complex(const CMatrix &z)
{
    Eigen::MatrixXd out(2 * z.rows(), z.cols());
    out.topRows(z.rows()) = z.real();
    out.bottomRows(z.rows()) = z.imag();
    return out;
}

// y = x sqrt(P)/||x||  =>  dx = s (dy - x (x.dy)/||x||^2)
Eigen::MatrixXd normalize_backward(const Eigen::MatrixXd &x, const Eigen::MatrixXd &gy, double budget)
{
    const double n2 = x.squaredNorm();
    if (n2 == 0.0)
        return gy;
    const double s = std::sqrt(budget / n2);
    return s * (gy - x * (x.cwiseProduct(gy).sum() / n2));
}

} // namespace

cdouble phase_atom(int b, int B)
{
    const int n = 1 << B;
    b = ((b % n) + n) % n;
    if ((4 * b) % n == 0)
    {
        static const cdouble quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        return quarter[(4 * b) / n];
    }
    return std::polar(1.0, two_pi * b / n);
}

cdouble quantize_phase(cdouble theta, int B)
{
    if (B < 1)
        throw DomainError("quantize_phase: B must be >= 1");
    const int n = 1 << B;
    double phi = std::arg(theta);
    if (phi < 0.0)
        phi += two_pi;
    const double idx = phi / (two_pi / n);
    const auto b = static_cast<int>(std::ceil(idx - 0.5));
    return phase_atom(b, B);
}

CVector quantize_phases(const CVector &theta, int B)
{
    CVector out(theta.size());
    for (Eigen::Index n = 0; n < theta.size(); ++n)
        out(n) = quantize_phase(theta(n), B);
    return out;
}

double distance_to_phase_set(cdouble theta, int B)
{
    double best = std::numeric_limits<double>::infinity();
    for (int b = 0; b < (1 << B); ++b)
        best = std::min(best, std::abs(theta - phase_atom(b, B)));
    return best;
}

cdouble unit_phase(double a, double b)
{
    const double rho = std::hypot(a, b);
    if (rho == 0.0)
        return {1.0, 0.0};
    return {a / rho, b / rho};
}

bool normalize_beamforming(CMatrix &X, double budget)
{
    if (!(budget > 0.0))
        throw DomainError("normalize_beamforming: budget must be > 0");
    const double p = X.squaredNorm();
    if (p == 0.0)
        return false;
    X *= std::sqrt(budget / p);
    return true;
}

Strategy decode_readout(const RawReadout &raw, const SystemConfig &cfg, bool quantize, const std::vector<int> &assign,
                        DecodeFlags *flags)
{
    const int N = cfg.N, I = cfg.I, U = cfg.num_users();
    if (raw.theta1.rows() != 2 * N || raw.theta1.cols() != I || raw.theta2.rows() != 2 * N ||
        raw.theta2.cols() != I || raw.G.rows() != 2 * cfg.M || raw.G.cols() != U || raw.F.rows() != 2 * cfg.L ||
        raw.F.cols() != U)
        throw DomainError("decode_readout: raw readout shape disagrees with config");

    Strategy s;
    s.assign = assign;
    auto phases = [&](const Eigen::MatrixXd &r, bool frozen)
    {
        std::vector<CVector> out;
        for (int i = 0; i < I; ++i)
        {
            CVector t(N);
            for (int n = 0; n < N; ++n)
                t(n) = frozen ? cdouble(1.0, 0.0) : unit_phase(r(n, i), r(N + n, i));
            out.push_back(quantize ? quantize_phases(t, cfg.B) : t);
        }
        return out;
    };
    s.theta1 = phases(raw.theta1, cfg.freeze_theta1);
    s.theta2 = phases(raw.theta2, cfg.freeze_theta2);
    s.G = complex_from_split(raw.G);
    s.F = complex_from_split(raw.F);
    const bool g_ok = normalize_beamforming(s.G, cfg.P_bs_max);
    const bool f_ok = normalize_beamforming(s.F, cfg.P_r_max);
    if (flags)
    {
        flags->bs_degenerate = !g_ok;
        flags->relay_degenerate = !f_ok;
    }
    return s;
}

RawReadout decode_readout_backward(const RawReadout &raw, const SystemConfig &cfg, const LinkModel::StrategyGrad &grad)
{
    const int N = cfg.N, I = cfg.I;
    RawReadout out;
    out.G = normalize_backward(raw.G, split_from_complex(grad.G), cfg.P_bs_max);
    out.F = normalize_backward(raw.F, split_from_complex(grad.F), cfg.P_r_max);

    auto phases = [&](const Eigen::MatrixXd &r, const std::vector<CVector> &g, bool frozen)
    {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * N, I);
        if (frozen)
            return d;
        for (int i = 0; i < I; ++i)
            for (int n = 0; n < N; ++n)
            {
                const double a = r(n, i), b = r(N + n, i);
                const double rho2 = a * a + b * b;
                if (rho2 == 0.0)
                    continue;
                const double rho3 = rho2 * std::sqrt(rho2);
                const cdouble gz = g[static_cast<std::size_t>(i)](n);
                d(n, i) = (b * b * gz.real() - a * b * gz.imag()) / rho3;
                d(N + n, i) = (a * a * gz.imag() - a * b * gz.real()) / rho3;
            }
        return d;
    };
    out.theta1 = phases(raw.theta1, grad.theta1, cfg.freeze_theta1);
    out.theta2 = phases(raw.theta2, grad.theta2, cfg.freeze_theta2);
    return out;
}

} // namespace risdf
