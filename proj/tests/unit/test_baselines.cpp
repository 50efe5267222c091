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


#include "risdf/baselines.hpp"
#include "risdf/readout.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>

using namespace risdf;
using doctest::Approx;

namespace
{

SystemConfig oracle_config()
{
    SystemConfig c = SystemConfig::desk_defaults();
    c.M = 2;
    c.N = 2;
    c.L = 2;
    c.J = 2;
    c.I = 1;
    c.K = 1;
    c.B = 1;
    c.q = 8;
    c.D = 1;
    c.set_uniform_thresholds(1.0, 1.0);
    return c;
}

// Exhaustive search written against the reference evaluator: every phase
// pair and relay, matched-filter beams built from loop-level channels.
double reference_oracle(const ChannelRealization &ch, const SystemConfig &c)
{
    const int N = c.N, levels = 1 << c.B;
    double best = -1.0;
    const int combos = static_cast<int>(std::pow(levels, N));
    auto phases = [&](int code)
    {
        CVector t(N);
        for (int n = 0; n < N; ++n)
        {
            t(n) = std::polar(1.0, 2.0 * std::numbers::pi * (code % levels) / levels);
            code /= levels;
        }
        return t;
    };
    for (int a = 0; a < combos; ++a)
        for (int j = 0; j < c.J; ++j)
            for (int b = 0; b < combos; ++b)
            {
                Strategy s;
                s.theta1 = {phases(a)};
                s.theta2 = {phases(b)};
                s.assign = {j};
                CVector h1(c.M), h2(c.L);
                for (int m = 0; m < c.M; ++m)
                {
                    h1(m) = ch.h_bs_user[0][0](m);
                    for (int n = 0; n < N; ++n)
                        h1(m) += ch.G_bs_ris[0](m, n) * s.theta1[0](n) * ch.h_ris_user[0][0](n);
                }
                for (int l = 0; l < c.L; ++l)
                {
                    h2(l) = ch.h_relay_user[j][0][0](l);
                    for (int n = 0; n < N; ++n)
                        h2(l) += ch.h_ris_user[0][0](n) * s.theta2[0](n) * ch.H_ris_relay[0][j](n, l);
                }
                s.G = h1.conjugate() * std::sqrt(c.P_bs_max) / h1.norm();
                s.F = h2.conjugate() * std::sqrt(c.P_r_max) / h2.norm();
                best = std::max(best, testing::reference_evaluate(ch, s, c).sum_rate);
            }
    return best;
}

} // namespace

TEST_CASE("random baseline: discrete phases, full power, relay 0")
{
    const SystemConfig c = SystemConfig::desk_defaults();
    const auto real = testing::make_data(c, 1).front();
    Rng rng(3);
    const Strategy s = random_strategy(real, c, rng);
    CHECK(s.assign == std::vector<int>{0, 0});
    const ConstraintReport cr = check_constraints(real, s, c);
    CHECK(std::abs(cr.c1_bs_power.slack) <= 1e-9 * c.P_bs_max);
    CHECK(std::abs(cr.c2_relay_power.slack) <= 1e-9 * c.P_r_max);
    CHECK(cr.c5_phases.satisfied);
    Rng again(3);
    CHECK(random_strategy(real, c, again).G == s.G);
}

TEST_CASE("MRT beams are conjugate channels scaled to the budget")
{
    CVector a(2), b(2);
    a << cdouble(1, 2), cdouble(0, -1);
    b << cdouble(3, 0), cdouble(1, 1);
    const CMatrix W = mrt_beamforming({a, b}, 4.0);
    const double scale = 2.0 / std::sqrt(a.squaredNorm() + b.squaredNorm());
    CHECK(std::abs(W(0, 0) - scale * cdouble(1, -2)) < 1e-14);
    CHECK(std::abs(W(1, 1) - scale * cdouble(1, -1)) < 1e-14);
    bool degenerate = false;
    const CMatrix Z = mrt_beamforming({CVector::Zero(2)}, 4.0, &degenerate);
    CHECK(degenerate);
    CHECK(Z.isZero());
    CHECK_THROWS_AS(mrt_beamforming({}, 1.0), DomainError);
    CHECK_THROWS_AS(mrt_beamforming({a, CVector::Zero(3)}, 1.0), DomainError);
}

TEST_CASE("oracle agrees with an independent exhaustive search")
{
    const SystemConfig c = oracle_config();
    CHECK(oracle_budget(c) == 32.0);
    for (const auto &real : testing::make_data(c, 6, 2))
    {
        const OracleResult o = brute_force_oracle(real, c);
        CHECK(o.enumerated == 32);
        CHECK(o.report.sum_rate == Approx(reference_oracle(real, c)).epsilon(1e-10));
        CHECK(brute_force_oracle(real, c, true).report.sum_rate == Approx(o.report.sum_rate).epsilon(1e-12));
        CHECK(check_constraints(real, o.strategy, c).c5_phases.satisfied);
    }
}

TEST_CASE("oracle refuses oversized searches")
{
    const SystemConfig c = SystemConfig::desk_defaults();
    const auto real = testing::make_data(c, 1).front();
    CHECK(oracle_budget(c) > 1e6);
    CHECK_THROWS_AS(brute_force_oracle(real, c), DomainError);
}

TEST_CASE("swarm search: monotone trace, feasible output, reproducible")
{
    const SystemConfig c = oracle_config();
    const auto data = testing::make_data(c, 4, 7);
    PsoConfig pc;
    pc.particles = 16;
    pc.iterations = 30;
    double pso_sum = 0.0, rnd_sum = 0.0;
    for (const auto &real : data)
    {
        const PsoResult r = pso_optimize(real, c, pc);
        REQUIRE(r.trace.size() == 31);
        for (std::size_t t = 1; t < r.trace.size(); ++t)
            CHECK(r.trace[t] >= r.trace[t - 1]);
        const ConstraintReport cr = check_constraints(real, r.strategy, c);
        CHECK(std::abs(cr.c1_bs_power.slack) <= 1e-9 * c.P_bs_max);
        CHECK(cr.c5_phases.satisfied);
        CHECK(r.report.sum_rate == Approx(evaluate_strategy(real, r.strategy, c).sum_rate).epsilon(1e-12));
        CHECK(pso_optimize(real, c, pc).report.sum_rate == r.report.sum_rate);
        pso_sum += r.report.sum_rate;
        Rng rng(1);
        rnd_sum += evaluate_strategy(real, random_strategy(real, c, rng), c).sum_rate;
    }
    CHECK(pso_sum > rnd_sum);
    pc.particles = 1;
    CHECK_THROWS_AS(pso_optimize(data[0], c, pc), DomainError);
}

TEST_CASE("flat DNN shapes and parameter matching")
{
    const SystemConfig c = SystemConfig::desk_defaults();
    const FlatDnn d(c, 16);
    CHECK(d.output_width() == 4 * c.N * c.I + 2 * c.M * c.num_users() + 2 * c.L * c.num_users());
    CHECK(d.net.stack("dnn").in() == d.input_width());
    const std::size_t target = 100000;
    const int h = flat_dnn_hidden_for(c, target);
    const auto gap = [&](int width)
    { return std::abs(static_cast<double>(FlatDnn(c, width).size()) - static_cast<double>(target)); };
    CHECK(gap(h) <= gap(h - 1));
    CHECK(gap(h) <= gap(h + 1));
}

TEST_CASE("flat DNN output is feasible and its gradient is exact")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 3);
    FlatDnn d(c, 12);
    d.init(2);
    d.fit_scale(data);
    const GnnOutput out = flat_dnn_forward(data[0], d, c, Mode::eval);
    CHECK(check_constraints(data[0], out.strategy, c).c5_phases.satisfied);
    CHECK(std::abs(out.strategy.G.squaredNorm() - c.P_bs_max) <= 1e-9 * c.P_bs_max);

    TrainConfig tc;
    const ReportLoss loss = make_loss(c, tc);
    RVector grad = RVector::Zero(static_cast<Eigen::Index>(d.size()));
    flat_dnn_forward_backward(data[1], d, c, loss, grad);
    auto value = [&](const FlatDnn &x)
    {
        ReportGrad unused;
        return loss(flat_dnn_forward(data[1], x, c, Mode::train).report, unused);
    };
    Rng rng(4);
    FlatDnn probe = d;
    const double h = 1e-5;
    for (int t = 0; t < 40; ++t)
    {
        const auto e = static_cast<Eigen::Index>(rng.integer(d.size()));
        const double keep = probe.net.values(e);
        probe.net.values(e) = keep + h;
        const double up = value(probe);
        probe.net.values(e) = keep - h;
        const double down = value(probe);
        probe.net.values(e) = keep;
        const double numeric = (up - down) / (2 * h);
        CHECK(std::abs(grad(e) - numeric) <= 1e-4 * std::max({std::abs(grad(e)), std::abs(numeric), 1e-6}));
    }
}

TEST_CASE("flat DNN training improves the tiny problem")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 64, 5);
    FlatDnn d(c, 16);
    d.init(1);
    d.fit_scale(data);
    TrainConfig tc;
    tc.lambda = 0.0;
    tc.epochs = 6;
    tc.batch_size = 16;
    tc.learning_rate = 3e-3;
    const TrainHistory h = flat_dnn_train(d, data, c, tc);
    REQUIRE(h.epochs.size() == 6);
    CHECK(h.epochs.back().sum_rate > h.epochs.front().sum_rate);
}
