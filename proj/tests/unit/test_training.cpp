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


#include "risdf/training.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace risdf;
using doctest::Approx;

namespace
{

// One group of two users served by relay 0; rates and relay SINRs chosen by hand.
RateReport synthetic_report()
{
    RateReport r;
    r.assign = {0};
    r.rate = {{0.4, 2.0}};
    r.sum_rate = 2.4;
    r.sinr_phase1 = r.sinr_phase2 = {{0.0, 0.0}};
    r.sinr_relay = {{0.004, 0.5}, {0.0, 0.0}};
    r.satisfied_user = {{false, true}};
    r.satisfied_group = {false};
    r.decode_ok = {{false, true}, {false, false}};
    return r;
}

SystemConfig synthetic_config()
{
    SystemConfig c = SystemConfig::desk_defaults();
    c.I = 1;
    c.K = 2;
    c.gamma_relay_th = 0.01;
    c.rate_th_user = {{1.0, 2.5}};
    c.rate_th_group = {1.5};
    return c;
}

} // namespace

TEST_CASE("losses on a hand-built report")
{
    const SystemConfig c = synthetic_config();
    const RateReport r = synthetic_report();
    const double beta = 100.0, lambda = 10.0;
    // -sum R + beta * (0.01 - 0.004)
    const double coarse = -2.4 + beta * 0.006;
    CHECK(loss_coarse(r, c, beta) == Approx(coarse).epsilon(1e-14));
    // user thresholds 1.0 and 2.5: gaps -0.6 and -0.5
    CHECK(loss_fine(r, c, beta, lambda) == Approx(coarse + lambda * 1.1).epsilon(1e-14));
    // group threshold 1.5 per user: gaps -1.1 and 0.5
    CHECK(loss_group(r, c, beta, lambda) == Approx(coarse + lambda * 1.1).epsilon(1e-14));
    // group sum 2.4 clears 1.5
    CHECK(loss_group(r, c, beta, lambda, true) == Approx(coarse).epsilon(1e-14));
    SystemConfig strict = c;
    strict.rate_th_group = {3.0};
    CHECK(loss_group(r, strict, beta, lambda, true) == Approx(coarse + lambda * 0.6).epsilon(1e-14));
}

TEST_CASE("loss gradients with respect to rates and relay SINRs")
{
    const SystemConfig c = synthetic_config();
    const RateReport r = synthetic_report();
    ReportGrad g;
    loss_fine(r, c, 100.0, 10.0, &g);
    CHECK(g.rate_bar[0][0] == -11.0);
    CHECK(g.rate_bar[0][1] == -11.0);
    CHECK(g.relay_bar[0][0] == -100.0);
    CHECK(g.relay_bar[0][1] == 0.0);
    loss_group(r, c, 100.0, 10.0, false, &g);
    CHECK(g.rate_bar[0][0] == -11.0);
    CHECK(g.rate_bar[0][1] == -1.0);
    loss_coarse(r, c, 100.0, &g);
    CHECK(g.rate_bar[0][0] == -1.0);
}

TEST_CASE("fine loss with lambda = 0 is the coarse loss")
{
    const SystemConfig c = SystemConfig::desk_defaults();
    Rng rng(1);
    for (const auto &real : testing::make_data(c, 5))
    {
        const RateReport r = evaluate_strategy(real, testing::random_test_strategy(c, rng), c);
        CHECK(loss_fine(r, c, 1000.0, 0.0) == loss_coarse(r, c, 1000.0));
    }
}

TEST_CASE("rate margin raises the penalty thresholds")
{
    const SystemConfig c = synthetic_config();
    const RateReport r = synthetic_report();
    TrainConfig tc;
    tc.beta = 100.0;
    tc.lambda = 10.0;
    tc.rate_margin = 0.25;
    ReportGrad g;
    // gaps become -0.85 and -0.75
    CHECK(make_loss(c, tc)(r, g) == Approx(-2.4 + 0.6 + 10.0 * 1.6).epsilon(1e-14));
    tc.rate_margin = -1.0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
}

TEST_CASE("train config validation and loss names")
{
    TrainConfig tc;
    CHECK_NOTHROW(tc.validate());
    tc.batch_size = 0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
    tc = TrainConfig{};
    tc.lambda = -1.0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
    for (LossKind k : {LossKind::coarse, LossKind::group, LossKind::fine})
        CHECK(parse_loss_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_loss_kind("medium"), ConfigError);
}

TEST_CASE("Adam matches a scalar transcription")
{
    const double lr = 0.01, decay = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-7;
    Adam opt(2, lr, decay);
    RVector p(2);
    p << 1.0, -2.0;
    double ref[2] = {1.0, -2.0}, m[2] = {0, 0}, v[2] = {0, 0};
    const double grads[3][2] = {{0.5, -1.0}, {0.25, 3.0}, {-0.5, 0.0}};
    for (int t = 1; t <= 3; ++t)
    {
        RVector g(2);
        g << grads[t - 1][0], grads[t - 1][1];
        opt.step(p, g);
        const double lr_now = lr / (1.0 + decay * (t - 1));
        for (int e = 0; e < 2; ++e)
        {
            m[e] = b1 * m[e] + (1 - b1) * grads[t - 1][e];
            v[e] = b2 * v[e] + (1 - b2) * grads[t - 1][e] * grads[t - 1][e];
            ref[e] -= lr_now * std::sqrt(1 - std::pow(b2, t)) / (1 - std::pow(b1, t)) * m[e] / (std::sqrt(v[e]) + eps);
        }
        CHECK(p(0) == Approx(ref[0]).epsilon(1e-14));
        CHECK(p(1) == Approx(ref[1]).epsilon(1e-14));
    }
    CHECK(opt.iterations() == 3);
    RVector wrong(3);
    CHECK_THROWS_AS(opt.step(wrong, wrong), DomainError);
}

TEST_CASE("analytic gradients agree with finite differences for every loss")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 2, 3);
    GnnParams p(c);
    p.init(5);
    p.scale = fit_input_scale(data, c);
    for (LossKind k : {LossKind::coarse, LossKind::group, LossKind::fine})
    {
        TrainConfig tc;
        tc.loss_kind = k;
        for (const auto &real : data)
        {
            const GradCheckResult r = gradient_check(p, real, c, tc, 48);
            CHECK(r.coordinates == 48);
            CHECK(r.max_rel_error < 1e-4);
        }
    }
}

TEST_CASE("forward_backward loss equals the loss of the train-mode report")
{
    const SystemConfig c = testing::tiny_config();
    const auto real = testing::make_data(c, 1).front();
    GnnParams p(c);
    p.init(2);
    TrainConfig tc;
    const ReportLoss loss = make_loss(c, tc);
    RVector grad = RVector::Zero(static_cast<Eigen::Index>(p.size()));
    GnnOutput out;
    const double v = forward_backward(real, p, c, loss, grad, &out);
    ReportGrad unused;
    CHECK(v == loss(forward(real, p, c, Mode::train).report, unused));
    CHECK(out.report.sum_rate == forward(real, p, c, Mode::train).report.sum_rate);
    CHECK(grad.norm() > 0.0);
}

TEST_CASE("training is reproducible and improves the tiny problem")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 64, 5);
    TrainConfig tc;
    tc.epochs = 6;
    tc.batch_size = 16;
    tc.learning_rate = 3e-3;
    tc.lambda = 0.0;
    auto run = [&]
    {
        GnnParams p(c);
        p.init(9);
        p.scale = fit_input_scale(data, c);
        const TrainHistory h = train(p, data, c, tc);
        return std::make_pair(p.net.values, h);
    };
    const auto [w1, h1] = run();
    const auto [w2, h2] = run();
    CHECK(w1 == w2);
    REQUIRE(h1.epochs.size() == 6);
    CHECK(h1.epochs.back().sum_rate > h1.epochs.front().sum_rate);
    CHECK(h1.epochs.back().loss == h2.epochs.back().loss);

    std::ostringstream csv;
    h1.write_csv(csv);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "epoch,loss,sum_rate,satisfaction_rate");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == 6);
}

TEST_CASE("fine loss at lambda = 0 trains exactly like the coarse loss")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 24, 5);
    auto history = [&](LossKind k)
    {
        TrainConfig tc;
        tc.loss_kind = k;
        tc.lambda = 0.0;
        tc.epochs = 2;
        tc.batch_size = 8;
        GnnParams p(c);
        p.init(1);
        return train(p, data, c, tc);
    };
    const TrainHistory a = history(LossKind::fine), b = history(LossKind::coarse);
    for (std::size_t e = 0; e < a.epochs.size(); ++e)
    {
        CHECK(a.epochs[e].loss == b.epochs[e].loss);
        CHECK(a.epochs[e].sum_rate == b.epochs[e].sum_rate);
    }
}

TEST_CASE("checkpoints are written on schedule")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 8);
    const auto dir = std::filesystem::temp_directory_path() / "risdf_ckpt_sched";
    std::filesystem::remove_all(dir);
    TrainConfig tc;
    tc.epochs = 4;
    tc.checkpoint_every = 2;
    tc.checkpoint_dir = dir.string();
    GnnParams p(c);
    p.init(1);
    train(p, data, c, tc);
    CHECK(std::filesystem::exists(dir / "epoch_0002.ckpt"));
    CHECK(std::filesystem::exists(dir / "epoch_0004.ckpt"));
    CHECK_FALSE(std::filesystem::exists(dir / "epoch_0003.ckpt"));
    CHECK(load_checkpoint((dir / "epoch_0004.ckpt").string()).net.values == p.net.values);
    std::filesystem::remove_all(dir);
}

TEST_CASE("non-finite gradients abort with the epoch and sample")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 4);
    RVector params = RVector::Zero(3);
    TrainConfig tc;
    tc.epochs = 1;
    int calls = 0;
    auto bad = [&](const ChannelRealization &, RVector &g, RateReport &) -> double
    {
        if (++calls == 3)
            g(1) = std::nan("");
        return 1.0;
    };
    CHECK_THROWS_WITH_AS(train_parameters(params, data, c, tc, bad), doctest::Contains("epoch 1"), TrainingError);
    CHECK_THROWS_AS(train_parameters(params, {}, c, tc, bad), DomainError);
}

TEST_CASE("early stopping halts on a flat loss")
{
    const SystemConfig c = testing::tiny_config();
    const auto data = testing::make_data(c, 4);
    RVector params = RVector::Zero(1);
    TrainConfig tc;
    tc.epochs = 50;
    tc.early_stop_patience = 3;
    auto flat = [](const ChannelRealization &, RVector &, RateReport &) { return 1.0; };
    CHECK(train_parameters(params, data, c, tc, flat).epochs.size() == 4);
}

TEST_CASE("summary micro-averages satisfaction over users and samples")
{
    RateReport a = synthetic_report(), b = synthetic_report();
    b.satisfied_user = {{true, true}};
    b.sum_rate = 3.6;
    b.decode_ok = {{true, true}, {false, false}};
    b.sinr_relay = {{1.0, 1.0}, {0.0, 0.0}};
    const EvalSummary s = summarize({a, b});
    CHECK(s.samples == 2);
    CHECK(s.mean_sum_rate == Approx(3.0));
    CHECK(s.satisfaction_rate == Approx(0.75));
    CHECK(s.decode_fraction == Approx(0.5));
    CHECK(summarize({}).samples == 0);
}
