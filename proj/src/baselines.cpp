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

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace risdf
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = rng.complex_normal();
    return m;
}

// Digits of idx in base 2^B fill I vectors of N atoms.
std::vector<CVector> phases_from_index(std::uint64_t idx, int I, int N, int B)
{
    const std::uint64_t base = 1ull << B;
    std::vector<CVector> out(static_cast<std::size_t>(I), CVector(N));
    for (int i = 0; i < I; ++i)
        for (int n = 0; n < N; ++n)
        {
            out[static_cast<std::size_t>(i)](n) = phase_atom(static_cast<int>(idx % base), B);
            idx /= base;
        }
    return out;
}

RMatrix reshape_block(const RMatrix &y, Eigen::Index start, Eigen::Index rows, Eigen::Index cols)
{
    return Eigen::Map<const RMatrix>(y.data() + start, rows, cols);
}

} // namespace

Strategy random_strategy(const ChannelRealization &real, const SystemConfig &cfg, Rng &rng)
{
    real.validate(cfg);
    const int U = cfg.num_users();
    Strategy s;
    for (auto *set : {&s.theta1, &s.theta2})
        for (int i = 0; i < cfg.I; ++i)
        {
            CVector t(cfg.N);
            for (int n = 0; n < cfg.N; ++n)
                t(n) = phase_atom(static_cast<int>(rng.integer(1ull << cfg.B)), cfg.B);
            set->push_back(t);
        }
    s.G = gaussian_matrix(cfg.M, U, rng);
    s.F = gaussian_matrix(cfg.L, U, rng);
    normalize_beamforming(s.G, cfg.P_bs_max);
    normalize_beamforming(s.F, cfg.P_r_max);
    s.assign.assign(static_cast<std::size_t>(cfg.I), 0);
    return s;
}

CMatrix mrt_beamforming(const std::vector<CVector> &channels, double budget, bool *degenerate)
{
    if (channels.empty())
        throw DomainError("mrt_beamforming: no channels");
    CMatrix W(channels.front().size(), static_cast<Eigen::Index>(channels.size()));
    for (std::size_t u = 0; u < channels.size(); ++u)
    {
        if (channels[u].size() != W.rows())
            throw DomainError("mrt_beamforming: channel lengths differ");
        W.col(static_cast<Eigen::Index>(u)) = channels[u].conjugate();
    }
    const bool ok = normalize_beamforming(W, budget);
    if (degenerate)
        *degenerate = !ok;
    return W;
}

Strategy mrt_strategy(const ChannelRealization &real, const SystemConfig &cfg, const std::vector<CVector> &theta1,
                      const std::vector<CVector> &theta2, const std::vector<int> &assign)
{
    std::vector<CVector> h1, h2;
    for (int i = 0; i < cfg.I; ++i)
        for (int k = 0; k < cfg.K; ++k)
        {
            const auto si = static_cast<std::size_t>(i);
            h1.push_back(effective_channel_phase1(real, theta1.at(si), i, k));
            h2.push_back(effective_channel_phase2(real, theta2.at(si), i, k, assign.at(si)));
        }
    Strategy s;
    s.theta1 = theta1;
    s.theta2 = theta2;
    s.assign = assign;
    s.G = mrt_beamforming(h1, cfg.P_bs_max);
    s.F = mrt_beamforming(h2, cfg.P_r_max);
    return s;
}

// ---------- particle swarm ----------

PsoResult pso_optimize(const ChannelRealization &real, const SystemConfig &cfg, const PsoConfig &pso)
{
    if (pso.particles < 2)
        throw DomainError("pso_optimize: need at least 2 particles");
    if (pso.iterations < 0)
        throw DomainError("pso_optimize: iterations must be >= 0");
    const int N = cfg.N, I = cfg.I, U = cfg.num_users();
    const Eigen::Index n_ang = 2 * N * I, n_g = 2 * cfg.M * U, n_f = 2 * cfg.L * U;
    const Eigen::Index dim = n_ang + n_g + n_f;
    const LinkModel model(real, cfg);

    auto decode = [&](const RVector &x)
    {
        RawReadout raw;
        raw.theta1.resize(2 * N, I);
        raw.theta2.resize(2 * N, I);
        for (int i = 0; i < I; ++i)
            for (int n = 0; n < N; ++n)
            {
                const double a1 = x(i * N + n), a2 = x(N * I + i * N + n);
                raw.theta1(n, i) = std::cos(a1);
                raw.theta1(N + n, i) = std::sin(a1);
                raw.theta2(n, i) = std::cos(a2);
                raw.theta2(N + n, i) = std::sin(a2);
            }
        raw.G = Eigen::Map<const RMatrix>(x.data() + n_ang, 2 * cfg.M, U);
        raw.F = Eigen::Map<const RMatrix>(x.data() + n_ang + n_g, 2 * cfg.L, U);
        Strategy s = decode_readout(raw, cfg, true, std::vector<int>(static_cast<std::size_t>(I), 0));
        RelaySelection sel = select_relays(model, s);
        s.assign = sel.assign;
        return std::make_pair(std::move(s), std::move(sel.report));
    };
    auto fitness = [&](const RateReport &r) { return -loss_fine(r, cfg, pso.beta, pso.lambda); };

    Rng rng(pso.seed);
    RVector vmax(dim);
    vmax.head(n_ang).setConstant(std::numbers::pi);
    vmax.tail(n_g + n_f).setConstant(2.0);
    auto init_particle = [&](RVector &x, RVector &v)
    {
        for (Eigen::Index d = 0; d < dim; ++d)
        {
            x(d) = d < n_ang ? rng.uniform(0.0, two_pi) : rng.normal();
            v(d) = 0.1 * vmax(d) * rng.uniform(-1.0, 1.0);
        }
    };

    const auto P = static_cast<std::size_t>(pso.particles);
    std::vector<RVector> x(P, RVector(dim)), v(P, RVector(dim)), pbest(P);
    std::vector<double> pfit(P, -std::numeric_limits<double>::infinity());
    RVector gbest;
    double gfit = -std::numeric_limits<double>::infinity();
    PsoResult res;

    auto assess = [&](std::size_t p)
    {
        for (int attempt = 0; attempt < 100; ++attempt)
        {
            auto [s, rep] = decode(x[p]);
            const double f = fitness(rep);
            if (std::isfinite(f))
            {
                if (f > pfit[p])
                {
                    pfit[p] = f;
                    pbest[p] = x[p];
                }
                if (f > gfit)
                {
                    gfit = f;
                    gbest = x[p];
                }
                return;
            }
            ++res.reinitialized;
            init_particle(x[p], v[p]);
        }
        throw DomainError("pso_optimize: fitness stays non-finite after re-initialization");
    };

    for (std::size_t p = 0; p < P; ++p)
    {
        init_particle(x[p], v[p]);
        assess(p);
    }
    res.trace.push_back(gfit);
    const double upper = std::nextafter(two_pi, 0.0);
    for (int it = 0; it < pso.iterations; ++it)
    {
        for (std::size_t p = 0; p < P; ++p)
        {
            for (Eigen::Index d = 0; d < dim; ++d)
            {
                double vel = pso.inertia * v[p](d) + pso.cognitive * rng.uniform() * (pbest[p](d) - x[p](d)) +
                             pso.social * rng.uniform() * (gbest(d) - x[p](d));
                vel = std::clamp(vel, -vmax(d), vmax(d));
                v[p](d) = vel;
                x[p](d) += vel;
                if (d < n_ang)
                    x[p](d) = std::clamp(x[p](d), 0.0, upper);
            }
            assess(p);
        }
        res.trace.push_back(gfit);
    }
    auto [s, rep] = decode(gbest);
    res.strategy = std::move(s);
    res.report = std::move(rep);
    return res;
}

// ---------- flat dense network ----------

FlatDnn::FlatDnn(const SystemConfig &cfg, int hidden_width, int hidden_layers)
    : scale(6, 1.0), M(cfg.M), N(cfg.N), L(cfg.L), J(cfg.J), I(cfg.I), K(cfg.K), hidden(hidden_width)
{
    net.add_stack("dnn", input_width(), hidden, hidden_layers, output_width());
}

int FlatDnn::input_width() const
{
    return 2 * (I * M * N + J * M * L + I * K * M + I * K * N + I * J * N * L + J * I * K * L);
}

namespace
{

template <typename Fn>
void for_each_family(const ChannelRealization &r, Fn &&fn)
{
    for (const auto &m : r.G_bs_ris)
        fn(0, m);
    for (const auto &m : r.H_bs_relay)
        fn(1, m);
    for (const auto &g : r.h_bs_user)
        for (const auto &v : g)
            fn(2, v);
    for (const auto &g : r.h_ris_user)
        for (const auto &v : g)
            fn(3, v);
    for (const auto &g : r.H_ris_relay)
        for (const auto &m : g)
            fn(4, m);
    for (const auto &rel : r.h_relay_user)
        for (const auto &g : rel)
            for (const auto &v : g)
                fn(5, v);
}

struct DnnRun
{
    std::unique_ptr<Tape> tape;
    int out = -1;
    RawReadout raw;
    Strategy strategy;
    RateReport report;
};

DnnRun run_dnn(const ChannelRealization &real, const FlatDnn &dnn, const SystemConfig &cfg, Mode mode,
               const LinkModel &model)
{
    if (cfg.M != dnn.M || cfg.N != dnn.N || cfg.L != dnn.L || cfg.J != dnn.J || cfg.I != dnn.I || cfg.K != dnn.K)
        throw ConfigError("flat network dimensions disagree with config");
    DnnRun run;
    run.tape = std::make_unique<Tape>(dnn.net.values);
    run.out = run.tape->dense(run.tape->constant(flat_dnn_features(real, dnn)), dnn.net.stack("dnn"));
    const RMatrix &y = run.tape->value(run.out);
    const int N = cfg.N, I = cfg.I, U = cfg.num_users();
    Eigen::Index pos = 0;
    run.raw.theta1 = reshape_block(y, pos, 2 * N, I);
    pos += 2 * N * I;
    run.raw.theta2 = reshape_block(y, pos, 2 * N, I);
    pos += 2 * N * I;
    run.raw.G = reshape_block(y, pos, 2 * cfg.M, U);
    pos += 2 * cfg.M * U;
    run.raw.F = reshape_block(y, pos, 2 * cfg.L, U);
    run.strategy = decode_readout(run.raw, cfg, mode == Mode::eval, std::vector<int>(static_cast<std::size_t>(I), 0));
    RelaySelection sel = select_relays(model, run.strategy);
    run.strategy.assign = sel.assign;
    run.report = std::move(sel.report);
    return run;
}

} // namespace

void FlatDnn::fit_scale(const std::vector<ChannelRealization> &data, std::size_t max_samples)
{
    std::vector<double> sum(6, 0.0), count(6, 0.0);
    for (std::size_t t = 0; t < std::min(max_samples, data.size()); ++t)
        for_each_family(data[t],
                        [&](int f, const CMatrix &m)
                        {
                            sum[static_cast<std::size_t>(f)] += m.squaredNorm();
                            count[static_cast<std::size_t>(f)] += static_cast<double>(m.size());
                        });
    for (std::size_t f = 0; f < 6; ++f)
        scale[f] = (count[f] > 0 && sum[f] > 0) ? 1.0 / std::sqrt(sum[f] / count[f]) : 1.0;
}

int flat_dnn_hidden_for(const SystemConfig &cfg, std::size_t target, int hidden_layers)
{
    const FlatDnn shape(cfg, 1, 0);
    const double in = shape.input_width(), out = shape.output_width();
    int best = 1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int h = 1; h <= 4096; ++h)
    {
        const double n =
            in * h + h + (hidden_layers - 1) * (static_cast<double>(h) * h + h) + static_cast<double>(h) * out + out;
        const double gap = std::abs(n - static_cast<double>(target));
        if (gap < best_gap)
        {
            best_gap = gap;
            best = h;
        }
    }
    return best;
}

RMatrix flat_dnn_features(const ChannelRealization &real, const FlatDnn &dnn)
{
    std::vector<cdouble> z;
    for_each_family(real,
                    [&](int f, const CMatrix &m)
                    {
                        for (Eigen::Index c = 0; c < m.cols(); ++c)
                            for (Eigen::Index r = 0; r < m.rows(); ++r)
                                z.push_back(dnn.scale[static_cast<std::size_t>(f)] * m(r, c));
                    });
    const auto n = static_cast<Eigen::Index>(z.size());
    if (2 * n != dnn.input_width())
        throw ConfigError("flat network input width disagrees with the realization");
    RMatrix x(2 * n, 1);
    for (Eigen::Index k = 0; k < n; ++k)
    {
        x(k, 0) = z[static_cast<std::size_t>(k)].real();
        x(n + k, 0) = z[static_cast<std::size_t>(k)].imag();
    }
    return x;
}

GnnOutput flat_dnn_forward(const ChannelRealization &real, const FlatDnn &dnn, const SystemConfig &cfg, Mode mode)
{
    const LinkModel model(real, cfg);
    DnnRun run = run_dnn(real, dnn, cfg, mode, model);
    return {std::move(run.strategy), std::move(run.report)};
}

double flat_dnn_forward_backward(const ChannelRealization &real, const FlatDnn &dnn, const SystemConfig &cfg,
                                 const ReportLoss &loss, RVector &grad, GnnOutput *out)
{
    const LinkModel model(real, cfg);
    DnnRun run = run_dnn(real, dnn, cfg, Mode::train, model);
    ReportGrad bars;
    bars.rate_bar.assign(static_cast<std::size_t>(cfg.I), std::vector<double>(static_cast<std::size_t>(cfg.K), 0.0));
    bars.relay_bar = bars.rate_bar;
    const double value = loss(run.report, bars);
    const RawReadout rg = decode_readout_backward(run.raw, cfg, model.vjp(run.strategy, bars.rate_bar, bars.relay_bar));
    RMatrix gy(dnn.output_width(), 1);
    Eigen::Index pos = 0;
    for (const RMatrix *block : {&rg.theta1, &rg.theta2, &rg.G, &rg.F})
    {
        gy.middleRows(pos, block->size()) = Eigen::Map<const RVector>(block->data(), block->size());
        pos += block->size();
    }
    run.tape->seed(run.out, gy);
    run.tape->backward(grad);
    if (out)
        *out = {std::move(run.strategy), std::move(run.report)};
    return value;
}

TrainHistory flat_dnn_train(FlatDnn &dnn, const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                            const TrainConfig &tc, const EpochCallback &on_epoch)
{
    const ReportLoss loss = make_loss(cfg, tc);
    SampleGradient fn = [&](const ChannelRealization &real, RVector &grad, RateReport &report)
    {
        GnnOutput out;
        const double v = flat_dnn_forward_backward(real, dnn, cfg, loss, grad, &out);
        report = std::move(out.report);
        return v;
    };
    return train_parameters(dnn.net.values, data, cfg, tc, fn, on_epoch);
}

// ---------- exhaustive oracle ----------

double oracle_budget(const SystemConfig &cfg)
{
    return std::pow(2.0, static_cast<double>(cfg.B) * cfg.N * cfg.I * 2) * std::pow(static_cast<double>(cfg.J), cfg.I);
}

OracleResult brute_force_oracle(const ChannelRealization &real, const SystemConfig &cfg, bool reverse_order,
                                double max_combinations)
{
    const double budget = oracle_budget(cfg);
    if (budget > max_combinations)
        throw DomainError("brute_force_oracle: " + std::to_string(static_cast<long long>(budget)) +
                          " combinations required, limit is " +
                          std::to_string(static_cast<long long>(max_combinations)));
    const LinkModel model(real, cfg);
    const auto per_set = static_cast<std::uint64_t>(std::llround(std::pow(2.0, cfg.B * cfg.N * cfg.I)));
    std::vector<std::vector<int>> assigns;
    for_each_assignment(cfg.I, cfg.J, [&](const std::vector<int> &a) { assigns.push_back(a); });

    OracleResult best;
    bool have = false;
    for (std::uint64_t a1 = 0; a1 < per_set; ++a1)
    {
        const std::uint64_t i1 = reverse_order ? per_set - 1 - a1 : a1;
        const std::vector<CVector> theta1 = phases_from_index(i1, cfg.I, cfg.N, cfg.B);
        for (std::size_t ai = 0; ai < assigns.size(); ++ai)
        {
            const auto &assign = assigns[reverse_order ? assigns.size() - 1 - ai : ai];
            for (std::uint64_t a2 = 0; a2 < per_set; ++a2)
            {
                const std::uint64_t i2 = reverse_order ? per_set - 1 - a2 : a2;
                Strategy s = mrt_strategy(real, cfg, theta1, phases_from_index(i2, cfg.I, cfg.N, cfg.B), assign);
                RateReport r = model.evaluate(s);
                ++best.enumerated;
                if (!have || r.sum_rate > best.report.sum_rate)
                {
                    best.strategy = std::move(s);
                    best.report = std::move(r);
                    have = true;
                }
            }
        }
    }
    return best;
}

} // namespace risdf
