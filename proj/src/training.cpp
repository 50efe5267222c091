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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace risdf
{

namespace
{

void reset_grad(const RateReport &r, ReportGrad *g)
{
    if (!g)
        return;
    g->rate_bar.assign(static_cast<std::size_t>(r.I()), std::vector<double>(static_cast<std::size_t>(r.K()), 0.0));
    g->relay_bar = g->rate_bar;
}

// -sum R plus the decode hinge on assigned streams.
double base_loss(const RateReport &r, const SystemConfig &cfg, double beta, ReportGrad *g)
{
    reset_grad(r, g);
    double loss = -r.sum_rate;
    for (int i = 0; i < r.I(); ++i)
        for (int k = 0; k < r.K(); ++k)
        {
            const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
            if (g)
                g->rate_bar[si][sk] = -1.0;
            const double gap = r.assigned_relay_sinr(i, k) - cfg.gamma_relay_th;
            if (gap < 0.0)
            {
                loss -= beta * gap;
                if (g)
                    g->relay_bar[si][sk] = -beta;
            }
        }
    return loss;
}

} // namespace

LossKind parse_loss_kind(const std::string &name)
{
    if (name == "coarse")
        return LossKind::coarse;
    if (name == "group")
        return LossKind::group;
    if (name == "fine")
        return LossKind::fine;
    throw ConfigError("unknown loss kind '" + name + "' (expected coarse, group or fine)");
}

std::string to_string(LossKind kind)
{
    switch (kind)
    {
    case LossKind::coarse:
        return "coarse";
    case LossKind::group:
        return "group";
    case LossKind::fine:
        return "fine";
    }
    return "fine";
}

void TrainConfig::validate() const
{
    if (!(beta >= 0.0) || !(lambda >= 0.0))
        throw ConfigError("beta and lambda must be >= 0");
    if (batch_size < 1)
        throw ConfigError("batch_size must be >= 1");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning_rate must be finite and >= 0");
    if (!(lr_decay >= 0.0))
        throw ConfigError("lr_decay must be >= 0");
    if (epochs < 0)
        throw ConfigError("epochs must be >= 0");
    if (!(rate_margin >= 0.0) || !std::isfinite(rate_margin))
        throw ConfigError("rate_margin must be finite and >= 0");
    if (checkpoint_every < 0 || early_stop_patience < 0)
        throw ConfigError("checkpoint_every and early_stop_patience must be >= 0");
}

double loss_coarse(const RateReport &r, const SystemConfig &cfg, double beta, ReportGrad *grad)
{
    return base_loss(r, cfg, beta, grad);
}

double loss_group(const RateReport &r, const SystemConfig &cfg, double beta, double lambda, bool group_sum,
                  ReportGrad *grad)
{
    double loss = base_loss(r, cfg, beta, grad);
    for (int i = 0; i < r.I(); ++i)
    {
        const auto si = static_cast<std::size_t>(i);
        const double th = cfg.rate_th_group.at(si);
        if (group_sum)
        {
            const double total = std::accumulate(r.rate[si].begin(), r.rate[si].end(), 0.0);
            if (total < th)
            {
                loss -= lambda * (total - th);
                if (grad)
                    for (auto &v : grad->rate_bar[si])
                        v -= lambda;
            }
            continue;
        }
        for (int k = 0; k < r.K(); ++k)
        {
            const double gap = r.rate[si][static_cast<std::size_t>(k)] - th;
            if (gap < 0.0)
            {
                loss -= lambda * gap;
                if (grad)
                    grad->rate_bar[si][static_cast<std::size_t>(k)] -= lambda;
            }
        }
    }
    return loss;
}

double loss_fine(const RateReport &r, const SystemConfig &cfg, double beta, double lambda, ReportGrad *grad)
{
    double loss = base_loss(r, cfg, beta, grad);
    for (int i = 0; i < r.I(); ++i)
        for (int k = 0; k < r.K(); ++k)
        {
            const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
            const double gap = r.rate[si][sk] - cfg.rate_th_user.at(si).at(sk);
            if (gap < 0.0)
            {
                loss -= lambda * gap;
                if (grad)
                    grad->rate_bar[si][sk] -= lambda;
            }
        }
    return loss;
}

ReportLoss make_loss(const SystemConfig &base, const TrainConfig &tc)
{
    SystemConfig cfg = base;
    for (auto &g : cfg.rate_th_user)
        for (auto &th : g)
            th += tc.rate_margin;
    for (auto &th : cfg.rate_th_group)
        th += tc.rate_margin;
    switch (tc.loss_kind)
    {
    case LossKind::coarse:
        return [cfg, tc](const RateReport &r, ReportGrad &g) { return loss_coarse(r, cfg, tc.beta, &g); };
    case LossKind::group:
        return [cfg, tc](const RateReport &r, ReportGrad &g)
        { return loss_group(r, cfg, tc.beta, tc.lambda, tc.group_sum_penalty, &g); };
    case LossKind::fine:
        break;
    }
    return [cfg, tc](const RateReport &r, ReportGrad &g) { return loss_fine(r, cfg, tc.beta, tc.lambda, &g); };
}

void TrainHistory::write_csv(std::ostream &out) const
{
    out << "epoch,loss,sum_rate,satisfaction_rate\n" << std::setprecision(10);
    for (const auto &e : epochs)
        out << e.epoch << ',' << e.loss << ',' << e.sum_rate << ',' << e.satisfaction_rate << '\n';
}

void TrainHistory::save_csv(const std::string &path) const
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write history to '" + path + "'");
    write_csv(out);
}

Adam::Adam(std::size_t size, double lr, double decay, double beta1, double beta2, double eps)
    : lr_(lr), decay_(decay), b1_(beta1), b2_(beta2), eps_(eps),
      m_(RVector::Zero(static_cast<Eigen::Index>(size))), v_(RVector::Zero(static_cast<Eigen::Index>(size)))
{
}

void Adam::step(RVector &params, const RVector &grad)
{
    if (grad.size() != params.size() || params.size() != m_.size())
        throw DomainError("Adam: parameter/gradient size mismatch");
    const double lr = lr_ / (1.0 + decay_ * static_cast<double>(t_));
    ++t_;
    m_ = b1_ * m_ + (1.0 - b1_) * grad;
    v_ = b2_ * v_ + (1.0 - b2_) * grad.cwiseAbs2();
    const double lr_t = lr * std::sqrt(1.0 - std::pow(b2_, t_)) / (1.0 - std::pow(b1_, t_));
    if (lr_t == 0.0)
        return;
    params.array() -= lr_t * m_.array() / (v_.array().sqrt() + eps_);
}

TrainHistory train_parameters(RVector &params, const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                              const TrainConfig &tc, const SampleGradient &sample_grad, const EpochCallback &on_epoch)
{
    tc.validate();
    if (data.empty())
        throw DomainError("training dataset is empty");
    data.front().validate(cfg);
    Adam opt(static_cast<std::size_t>(params.size()), tc.learning_rate, tc.lr_decay);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(tc.seed);

    TrainHistory hist;
    double best = std::numeric_limits<double>::infinity();
    int stale = 0;
    RVector grad(params.size()), sample(params.size());
    for (int epoch = 1; epoch <= tc.epochs; ++epoch)
    {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0, rate_sum = 0.0;
        std::size_t sat = 0, users = 0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(tc.batch_size))
        {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(tc.batch_size));
            grad.setZero();
            for (std::size_t p = start; p < stop; ++p)
            {
                sample.setZero();
                RateReport report;
                const double loss = sample_grad(data[order[p]], sample, report);
                if (!std::isfinite(loss) || !sample.allFinite())
                {
                    std::ostringstream msg;
                    msg << "non-finite " << (std::isfinite(loss) ? "gradient" : "loss") << " at epoch " << epoch
                        << ", sample " << order[p] << " (loss " << loss << ", sum rate " << report.sum_rate << ")";
                    throw TrainingError(msg.str());
                }
                grad += sample;
                loss_sum += loss;
                rate_sum += report.sum_rate;
                for (const auto &row : report.satisfied_user)
                    for (bool b : row)
                    {
                        sat += b ? 1 : 0;
                        ++users;
                    }
            }
            grad /= static_cast<double>(stop - start);
            opt.step(params, grad);
        }
        const double n = static_cast<double>(data.size());
        EpochStats st{epoch, loss_sum / n, rate_sum / n, users ? static_cast<double>(sat) / users : 0.0};
        hist.epochs.push_back(st);
        if (on_epoch)
            on_epoch(st, params);
        if (tc.early_stop_patience > 0)
        {
            if (st.loss < best)
            {
                best = st.loss;
                stale = 0;
            }
            else if (++stale >= tc.early_stop_patience)
                break;
        }
    }
    return hist;
}

TrainHistory train(GnnParams &params, const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                   const TrainConfig &tc, const EpochCallback &on_epoch)
{
    params.check_compatible(cfg);
    const ReportLoss loss = make_loss(cfg, tc);
    SampleGradient fn = [&](const ChannelRealization &real, RVector &grad, RateReport &report)
    {
        GnnOutput out;
        const double v = forward_backward(real, params, cfg, loss, grad, &out);
        report = std::move(out.report);
        return v;
    };
    if (tc.checkpoint_every > 0 && !tc.checkpoint_dir.empty())
        std::filesystem::create_directories(tc.checkpoint_dir);
    EpochCallback cb = [&](const EpochStats &st, const RVector &values)
    {
        if (tc.checkpoint_every > 0 && !tc.checkpoint_dir.empty() && st.epoch % tc.checkpoint_every == 0)
        {
            std::ostringstream name;
            name << "epoch_" << std::setw(4) << std::setfill('0') << st.epoch << ".ckpt";
            save_checkpoint(params, (std::filesystem::path(tc.checkpoint_dir) / name.str()).string());
        }
        if (on_epoch)
            on_epoch(st, values);
    };
    return train_parameters(params.net.values, data, cfg, tc, fn, cb);
}

GradCheckResult gradient_check(const GnnParams &params, const ChannelRealization &real, const SystemConfig &cfg,
                               const TrainConfig &tc, std::size_t coordinates, std::uint64_t seed, double step,
                               double floor)
{
    const ReportLoss loss = make_loss(cfg, tc);
    RVector grad = RVector::Zero(static_cast<Eigen::Index>(params.size()));
    forward_backward(real, params, cfg, loss, grad);

    auto value_at = [&](const GnnParams &p)
    {
        GnnOutput out = forward(real, p, cfg, Mode::train);
        ReportGrad unused;
        return loss(out.report, unused);
    };

    std::vector<std::size_t> idx(params.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(coordinates, idx.size()));

    GradCheckResult res;
    res.coordinates = idx.size();
    GnnParams probe = params;
    for (std::size_t c : idx)
    {
        const auto e = static_cast<Eigen::Index>(c);
        const double orig = probe.net.values(e);
        probe.net.values(e) = orig + step;
        const double up = value_at(probe);
        probe.net.values(e) = orig - step;
        const double down = value_at(probe);
        probe.net.values(e) = orig;
        const double numeric = (up - down) / (2.0 * step);
        const double analytic = grad(e);
        const double rel =
            std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
        if (rel >= res.max_rel_error)
        {
            res.max_rel_error = rel;
            res.worst_index = c;
            res.analytic = analytic;
            res.numeric = numeric;
        }
    }
    return res;
}

EvalSummary summarize(const std::vector<RateReport> &reports)
{
    EvalSummary s;
    s.samples = reports.size();
    if (reports.empty())
        return s;
    std::size_t sat = 0, users = 0, decoded = 0;
    double rate = 0.0;
    for (const auto &r : reports)
    {
        rate += r.sum_rate;
        decoded += r.all_assigned_decode_ok() ? 1 : 0;
        for (const auto &row : r.satisfied_user)
            for (bool b : row)
            {
                sat += b ? 1 : 0;
                ++users;
            }
    }
    const double n = static_cast<double>(reports.size());
    s.mean_sum_rate = rate / n;
    s.satisfaction_rate = users ? static_cast<double>(sat) / static_cast<double>(users) : 0.0;
    s.decode_fraction = static_cast<double>(decoded) / n;
    return s;
}

} // namespace risdf
