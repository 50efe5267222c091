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


#include "risdf/gnn.hpp"
#include "risdf/binary_io.hpp"

#include <cmath>
#include <memory>

namespace risdf
{

namespace
{

constexpr char kMagic[7] = {'R', 'I', 'S', 'G', 'N', 'N', '1'};
constexpr std::uint32_t kVersion = 1;

void require_width(const Tape &tape, int id, int expected, const std::string &what)
{
    if (tape.rows(id) != expected)
        throw ConfigError(what + " has width " + std::to_string(tape.rows(id)) + ", expected " +
                          std::to_string(expected));
}

// One column per (item, column c): [Re; Im] of column c, scaled by row family.
RMatrix column_features(const std::vector<CMatrix> &H, double cascade, double direct)
{
    if (H.empty())
        return {};
    const Eigen::Index R = H.front().rows(), C = H.front().cols();
    RMatrix out(2 * R, static_cast<Eigen::Index>(H.size()) * C);
    for (std::size_t u = 0; u < H.size(); ++u)
        for (Eigen::Index c = 0; c < C; ++c)
            for (Eigen::Index r = 0; r < R; ++r)
            {
                const double s = r + 1 == R ? direct : cascade;
                const Eigen::Index col = static_cast<Eigen::Index>(u) * C + c;
                out(r, col) = s * H[u](r, c).real();
                out(R + r, col) = s * H[u](r, c).imag();
            }
    return out;
}

// One column per item: [Re; Im] of the column-major vectorization.
RMatrix vec_features(const std::vector<CMatrix> &H, double cascade, double direct)
{
    if (H.empty())
        return {};
    const Eigen::Index R = H.front().rows(), C = H.front().cols(), n = R * C;
    RMatrix out(2 * n, static_cast<Eigen::Index>(H.size()));
    for (std::size_t u = 0; u < H.size(); ++u)
        for (Eigen::Index c = 0; c < C; ++c)
            for (Eigen::Index r = 0; r < R; ++r)
            {
                const double s = r + 1 == R ? direct : cascade;
                out(c * R + r, static_cast<Eigen::Index>(u)) = s * H[u](r, c).real();
                out(n + c * R + r, static_cast<Eigen::Index>(u)) = s * H[u](r, c).imag();
            }
    return out;
}

RMatrix relay_features(const std::vector<CMatrix> &HR, double scale)
{
    Eigen::Index n = 0;
    for (const auto &m : HR)
        n += m.size();
    RMatrix out(2 * n, 1);
    Eigen::Index pos = 0;
    for (const auto &m : HR)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            for (Eigen::Index r = 0; r < m.rows(); ++r)
            {
                out(pos, 0) = scale * m(r, c).real();
                out(n + pos, 0) = scale * m(r, c).imag();
                ++pos;
            }
    return out;
}

std::vector<int> group_index(int I, int K)
{
    std::vector<int> g;
    for (int i = 0; i < I; ++i)
        for (int k = 0; k < K; ++k)
            g.push_back(i);
    return g;
}

// RIS node i: mean over the columns that belong to group i.
int group_means(Tape &tape, int cols, int I, int per_group)
{
    std::vector<int> means;
    for (int i = 0; i < I; ++i)
        means.push_back(tape.col_mean(cols, i * per_group, per_group));
    return tape.hcat(means);
}

// Shared update pattern: RIS nodes see the mean user; users see the max of
// the others and their own RIS node.
NodeState update(Tape &tape, const NodeState &state, const DenseStack &ris_fn, const DenseStack &user_fn, int I,
                 int K)
{
    const int U = I * K;
    const int mean_u = tape.col_mean(state.users, 0, U);
    const int ris_in = tape.vcat({state.ris, tape.gather_cols(mean_u, std::vector<int>(static_cast<std::size_t>(I), 0))});
    const int user_in = tape.vcat({state.users, tape.max_others(state.users), tape.gather_cols(state.ris, group_index(I, K))});
    NodeState next = state;
    next.ris = tape.vcat({tape.dense(ris_in, ris_fn), state.ris});
    next.users = tape.vcat({tape.dense(user_in, user_fn), state.users});
    next.layer = state.layer + 1;
    return next;
}

struct Branch
{
    std::vector<int> assign;
    ReadoutIds readout;
    RawReadout raw;
    Strategy strategy;
    RateReport report;
};

struct NetworkRun
{
    std::unique_ptr<Tape> tape;
    ReadoutIds phase1;
    std::vector<Branch> branches;
    std::size_t best = 0;
};

NetworkRun run_network(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg, Mode mode,
                       const LinkModel &model, const std::vector<std::vector<int>> &assignments)
{
    params.check_compatible(cfg);
    NetworkRun run;
    run.tape = std::make_unique<Tape>(params.net.values);
    Tape &tape = *run.tape;

    NodeState st = phase1_init(tape, build_phase1_inputs(real, cfg), params, cfg);
    for (int d = 1; d <= cfg.D; ++d)
        st = phase1_update(tape, st, params, cfg, d);
    run.phase1 = phase1_readout(tape, st, params);

    for (const auto &a : assignments)
    {
        Branch b;
        b.assign = a;
        NodeState s2 = phase2_init(tape, st, build_phase2_inputs(real, a, cfg), params, cfg);
        for (int d = 1; d <= cfg.D; ++d)
            s2 = phase2_update(tape, s2, params, cfg, d);
        b.readout = phase2_readout(tape, s2, params);
        b.raw = {tape.value(run.phase1.theta), tape.value(b.readout.theta), tape.value(run.phase1.beams),
                 tape.value(b.readout.beams)};
        b.strategy = decode_readout(b.raw, cfg, mode == Mode::eval, a);
        b.report = model.evaluate(b.strategy);
        run.branches.push_back(std::move(b));
        if (run.branches.size() > 1 && report_preferred(run.branches.back().report, run.branches[run.best].report))
            run.best = run.branches.size() - 1;
    }
    return run;
}

std::vector<std::vector<int>> all_assignments(int I, int J)
{
    std::vector<std::vector<int>> out;
    for_each_assignment(I, J, [&](const std::vector<int> &a) { out.push_back(a); });
    return out;
}

double rms_scale(double sum_sq, std::size_t count)
{
    if (count == 0 || sum_sq == 0.0)
        return 1.0;
    return 1.0 / std::sqrt(sum_sq / static_cast<double>(count));
}

} // namespace

// ---------- parameters ----------

GnnParams::GnnParams(const SystemConfig &cfg, int hidden)
    : M(cfg.M), N(cfg.N), L(cfg.L), I(cfg.I), J(cfg.J), q(cfg.q), D(cfg.D), hidden_layers(hidden)
{
    if (q < 2 || q % 2 != 0)
        throw ConfigError("q must be even and >= 2");
    if (D < 0)
        throw ConfigError("D must be >= 0");
    const int h = hidden_layers;
    net.add_stack("f0", 2 * (N + 1), q, h, q / 2);
    net.add_stack("fR0", 2 * M * L * I * J, q, h, q / 2);
    net.add_stack("fu0", 2 * M * (N + 1), q, h, q);
    for (int d = 1; d <= D; ++d)
    {
        net.add_stack("f" + std::to_string(d), 2 * q * d, q, h, q);
        net.add_stack("fu" + std::to_string(d), 3 * q * d, q, h, q);
    }
    net.add_stack("f_readout", q * (D + 1), 0, 0, 2 * N);
    net.add_stack("fu_readout", q * (D + 1), 0, 0, 2 * M);
    net.add_stack("g0", 2 * (N + 1), q, h, q);
    net.add_stack("gv0", 2 * L * (N + 1), q, h, q);
    for (int d = 1; d <= D; ++d)
    {
        net.add_stack("g" + std::to_string(d), 2 * q * (D + d + 1), q, h, q);
        net.add_stack("gv" + std::to_string(d), 3 * q * (D + d + 1), q, h, q);
    }
    net.add_stack("g_readout", q * (2 * D + 2), 0, 0, 2 * N);
    net.add_stack("gv_readout", q * (2 * D + 2), 0, 0, 2 * L);
}

void GnnParams::check_compatible(const SystemConfig &cfg) const
{
    const std::pair<const char *, std::pair<int, int>> checks[] = {
        {"M", {M, cfg.M}}, {"N", {N, cfg.N}}, {"L", {L, cfg.L}}, {"I", {I, cfg.I}},
        {"J", {J, cfg.J}}, {"q", {q, cfg.q}}, {"D", {D, cfg.D}}};
    for (const auto &[name, v] : checks)
        if (v.first != v.second)
            throw ConfigError(std::string("model/config mismatch in ") + name + ": model has " +
                              std::to_string(v.first) + ", config has " + std::to_string(v.second));
}

InputScale fit_input_scale(const std::vector<ChannelRealization> &data, const SystemConfig &cfg,
                           std::size_t max_samples)
{
    double s[5] = {0, 0, 0, 0, 0};
    std::size_t n[5] = {0, 0, 0, 0, 0};
    auto add = [&](int f, const CMatrix &m, Eigen::Index r0, Eigen::Index rows)
    {
        s[f] += m.middleRows(r0, rows).squaredNorm();
        n[f] += static_cast<std::size_t>(rows * m.cols());
    };
    std::vector<int> relay0(static_cast<std::size_t>(cfg.I), 0);
    const std::size_t count = std::min(max_samples, data.size());
    for (std::size_t t = 0; t < count; ++t)
    {
        const Phase1Inputs p1 = build_phase1_inputs(data[t], cfg);
        for (const auto &h : p1.H1)
        {
            add(0, h, 0, cfg.N);
            add(1, h, cfg.N, 1);
        }
        for (const auto &h : p1.HR)
            add(2, h, 0, h.rows());
        for_each_assignment(cfg.I, cfg.J,
                            [&](const std::vector<int> &a)
                            {
                                bool uniform = true;
                                for (int v : a)
                                    uniform = uniform && v == a.front();
                                if (!uniform)
                                    return;
                                for (const auto &h : build_phase2_inputs(data[t], a, cfg).H2)
                                {
                                    add(3, h, 0, cfg.N);
                                    add(4, h, cfg.N, 1);
                                }
                            });
    }
    return {rms_scale(s[0], n[0]), rms_scale(s[1], n[1]), rms_scale(s[2], n[2]), rms_scale(s[3], n[3]),
            rms_scale(s[4], n[4])};
}

void save_checkpoint(const GnnParams &p, const std::string &path)
{
    ByteWriter w;
    w.bytes(kMagic, sizeof(kMagic));
    w.u32(kVersion);
    for (int v : {p.q, p.D, p.M, p.N, p.L, p.J, p.I, p.hidden_layers})
        w.u32(static_cast<std::uint32_t>(v));
    std::uint32_t arrays = 1;
    for (const auto &s : p.net.stacks())
        arrays += 2 * static_cast<std::uint32_t>(s.layers.size());
    w.u32(arrays);
    w.str("input_scale");
    w.u64(5);
    for (double v : {p.scale.h1_cascade, p.scale.h1_direct, p.scale.hr, p.scale.h2_cascade, p.scale.h2_direct})
        w.f64(v);
    for (const auto &s : p.net.stacks())
        for (std::size_t l = 0; l < s.layers.size(); ++l)
        {
            const DenseLayer &layer = s.layers[l];
            const std::size_t nw = static_cast<std::size_t>(layer.in) * layer.out;
            w.str(s.name + "." + std::to_string(l) + ".W");
            w.u64(nw);
            for (std::size_t k = 0; k < nw; ++k)
                w.f64(p.net.values(static_cast<Eigen::Index>(layer.offset + k)));
            w.str(s.name + "." + std::to_string(l) + ".b");
            w.u64(static_cast<std::uint64_t>(layer.out));
            for (int k = 0; k < layer.out; ++k)
                w.f64(p.net.values(static_cast<Eigen::Index>(layer.offset + nw + static_cast<std::size_t>(k))));
        }
    w.to_file(path, "checkpoint");
}

GnnParams load_checkpoint(const std::string &path)
{
    ByteReader rd = ByteReader::from_file(path, "checkpoint");
    char magic[7];
    rd.bytes(magic, sizeof(magic), "magic");
    if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
        throw FormatError("checkpoint: bad magic (expected RISGNN1)");
    const std::uint32_t version = rd.u32("version");
    if (version != kVersion)
        throw FormatError("checkpoint: unsupported version " + std::to_string(version));
    SystemConfig cfg;
    cfg.q = static_cast<int>(rd.u32("q"));
    cfg.D = static_cast<int>(rd.u32("D"));
    cfg.M = static_cast<int>(rd.u32("M"));
    cfg.N = static_cast<int>(rd.u32("N"));
    cfg.L = static_cast<int>(rd.u32("L"));
    cfg.J = static_cast<int>(rd.u32("J"));
    cfg.I = static_cast<int>(rd.u32("I"));
    const int hidden = static_cast<int>(rd.u32("hidden_layers"));
    for (int v : {cfg.q, cfg.M, cfg.N, cfg.L, cfg.J, cfg.I})
        if (v < 1 || v > (1 << 16))
            throw FormatError("checkpoint: header dimension out of range");
    if (cfg.D > 64 || hidden > 64)
        throw FormatError("checkpoint: header depth out of range");
    GnnParams p(cfg, hidden);

    const std::uint32_t arrays = rd.u32("array_count");
    std::uint32_t expected = 1;
    for (const auto &s : p.net.stacks())
        expected += 2 * static_cast<std::uint32_t>(s.layers.size());
    if (arrays != expected)
        throw FormatError("checkpoint: array count " + std::to_string(arrays) + " does not match layout (" +
                          std::to_string(expected) + ")");

    auto read_array = [&](const std::string &name, std::uint64_t len, double *dst)
    {
        const std::string got = rd.str("array name");
        if (got != name)
            throw FormatError("checkpoint: expected array '" + name + "', found '" + got + "'");
        const std::uint64_t n = rd.u64(name.c_str());
        if (n != len)
            throw FormatError("checkpoint: shape mismatch in field " + name);
        for (std::uint64_t k = 0; k < n; ++k)
            dst[k] = rd.f64(name.c_str());
    };
    double sc[5];
    read_array("input_scale", 5, sc);
    p.scale = {sc[0], sc[1], sc[2], sc[3], sc[4]};
    for (const auto &s : p.net.stacks())
        for (std::size_t l = 0; l < s.layers.size(); ++l)
        {
            const DenseLayer &layer = s.layers[l];
            const std::size_t nw = static_cast<std::size_t>(layer.in) * layer.out;
            read_array(s.name + "." + std::to_string(l) + ".W", nw, p.net.values.data() + layer.offset);
            read_array(s.name + "." + std::to_string(l) + ".b", static_cast<std::uint64_t>(layer.out),
                       p.net.values.data() + layer.offset + nw);
        }
    if (rd.remaining() != 0)
        throw FormatError("checkpoint: trailing bytes after last array");
    return p;
}

// ---------- inputs ----------

Phase1Inputs build_phase1_inputs(const ChannelRealization &real, const SystemConfig &cfg)
{
    real.validate(cfg);
    Phase1Inputs in;
    for (int i = 0; i < cfg.I; ++i)
        for (int k = 0; k < cfg.K; ++k)
        {
            const auto si = static_cast<std::size_t>(i), sk = static_cast<std::size_t>(k);
            CMatrix h(cfg.N + 1, cfg.M);
            h.topRows(cfg.N) = cascaded_bs_user(real.G_bs_ris[si], real.h_ris_user[si][sk]).transpose();
            h.row(cfg.N) = real.h_bs_user[si][sk].transpose();
            in.H1.push_back(std::move(h));
        }
    for (int i = 0; i < cfg.I; ++i)
        for (int j = 0; j < cfg.J; ++j)
        {
            const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
            in.HR.push_back(real.G_bs_ris[si] * real.H_ris_relay[si][sj] + real.H_bs_relay[sj]);
        }
    return in;
}

Phase2Inputs build_phase2_inputs(const ChannelRealization &real, const std::vector<int> &assign,
                                 const SystemConfig &cfg)
{
    real.validate(cfg);
    if (static_cast<int>(assign.size()) != cfg.I)
        throw DomainError("assignment size must equal I");
    Phase2Inputs in;
    for (int i = 0; i < cfg.I; ++i)
    {
        const int j = assign[static_cast<std::size_t>(i)];
        if (j < 0 || j >= cfg.J)
            throw DomainError("relay assignment out of range");
        const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
        for (int k = 0; k < cfg.K; ++k)
        {
            const auto sk = static_cast<std::size_t>(k);
            CMatrix h(cfg.N + 1, cfg.L);
            h.topRows(cfg.N) = cascaded_relay_user(real.H_ris_relay[si][sj], real.h_ris_user[si][sk]).transpose();
            h.row(cfg.N) = real.h_relay_user[sj][si][sk].transpose();
            in.H2.push_back(std::move(h));
        }
    }
    return in;
}

// ---------- phase 1 ----------

NodeState phase1_init(Tape &tape, const Phase1Inputs &in, const GnnParams &params, const SystemConfig &cfg)
{
    const int q = params.q;
    const int cols = tape.constant(column_features(in.H1, params.scale.h1_cascade, params.scale.h1_direct));
    const int per_col = tape.dense(cols, params.stack("f0"));
    const int means = group_means(tape, per_col, cfg.I, cfg.K * cfg.M);
    const int relay = tape.dense(tape.constant(relay_features(in.HR, params.scale.hr)), params.stack("fR0"));
    NodeState st;
    st.ris = tape.vcat({means, tape.gather_cols(relay, std::vector<int>(static_cast<std::size_t>(cfg.I), 0))});
    st.users = tape.dense(tape.constant(vec_features(in.H1, params.scale.h1_cascade, params.scale.h1_direct)),
                          params.stack("fu0"));
    require_width(tape, st.ris, q, "phase-1 RIS feature at layer 0");
    require_width(tape, st.users, q, "phase-1 user feature at layer 0");
    return st;
}

NodeState phase1_update(Tape &tape, const NodeState &state, const GnnParams &params, const SystemConfig &cfg, int d)
{
    if (d < 1 || d > params.D)
        throw DomainError("phase-1 layer index " + std::to_string(d) + " outside [1, D]");
    if (state.phase2 || state.layer != d - 1)
        throw DomainError("phase-1 update applied out of sequence");
    const std::string tag = std::to_string(d);
    NodeState next = update(tape, state, params.stack("f" + tag), params.stack("fu" + tag), cfg.I, cfg.K);
    require_width(tape, next.ris, params.q * (d + 1), "phase-1 RIS feature at layer " + tag);
    require_width(tape, next.users, params.q * (d + 1), "phase-1 user feature at layer " + tag);
    return next;
}

ReadoutIds phase1_readout(Tape &tape, const NodeState &state, const GnnParams &params)
{
    if (state.phase2 || state.layer != params.D)
        throw DomainError("phase-1 readout needs the layer-D state");
    return {tape.dense(state.ris, params.stack("f_readout")), tape.dense(state.users, params.stack("fu_readout"))};
}

// ---------- phase 2 ----------

NodeState phase2_init(Tape &tape, const NodeState &phase1, const Phase2Inputs &in, const GnnParams &params,
                      const SystemConfig &cfg)
{
    if (phase1.phase2 || phase1.layer != params.D || phase1.ris < 0)
        throw DomainError("phase 2 needs the final phase-1 state");
    const int cols = tape.constant(column_features(in.H2, params.scale.h2_cascade, params.scale.h2_direct));
    const int per_col = tape.dense(cols, params.stack("g0"));
    const int means = group_means(tape, per_col, cfg.I, cfg.K * cfg.L);
    const int users = tape.dense(tape.constant(vec_features(in.H2, params.scale.h2_cascade, params.scale.h2_direct)),
                                 params.stack("gv0"));
    NodeState st;
    st.phase2 = true;
    st.ris = tape.vcat({means, phase1.ris});
    st.users = tape.vcat({users, phase1.users});
    const int w = params.q * (params.D + 2);
    require_width(tape, st.ris, w, "phase-2 RIS feature at layer 0");
    require_width(tape, st.users, w, "phase-2 user feature at layer 0");
    return st;
}

NodeState phase2_update(Tape &tape, const NodeState &state, const GnnParams &params, const SystemConfig &cfg, int d)
{
    if (d < 1 || d > params.D)
        throw DomainError("phase-2 layer index " + std::to_string(d) + " outside [1, D]");
    if (!state.phase2 || state.layer != d - 1)
        throw DomainError("phase-2 update applied out of sequence");
    const std::string tag = std::to_string(d);
    NodeState next = update(tape, state, params.stack("g" + tag), params.stack("gv" + tag), cfg.I, cfg.K);
    const int w = params.q * (params.D + d + 2);
    require_width(tape, next.ris, w, "phase-2 RIS feature at layer " + tag);
    require_width(tape, next.users, w, "phase-2 user feature at layer " + tag);
    return next;
}

ReadoutIds phase2_readout(Tape &tape, const NodeState &state, const GnnParams &params)
{
    if (!state.phase2 || state.layer != params.D)
        throw DomainError("phase-2 readout needs the layer-D state");
    return {tape.dense(state.ris, params.stack("g_readout")), tape.dense(state.users, params.stack("gv_readout"))};
}

// ---------- end to end ----------

GnnOutput forward(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg, Mode mode)
{
    const LinkModel model(real, cfg);
    NetworkRun run = run_network(real, params, cfg, mode, model, all_assignments(cfg.I, cfg.J));
    Branch &b = run.branches[run.best];
    return {std::move(b.strategy), std::move(b.report)};
}

GnnOutput forward_pinned(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg, Mode mode,
                         const std::vector<int> &assign)
{
    const LinkModel model(real, cfg);
    NetworkRun run = run_network(real, params, cfg, mode, model, {assign});
    Branch &b = run.branches.front();
    return {std::move(b.strategy), std::move(b.report)};
}

double forward_backward(const ChannelRealization &real, const GnnParams &params, const SystemConfig &cfg,
                        const ReportLoss &loss, RVector &grad, GnnOutput *out)
{
    const LinkModel model(real, cfg);
    NetworkRun run = run_network(real, params, cfg, Mode::train, model, all_assignments(cfg.I, cfg.J));
    Branch &b = run.branches[run.best];

    ReportGrad bars;
    bars.rate_bar.assign(static_cast<std::size_t>(cfg.I), std::vector<double>(static_cast<std::size_t>(cfg.K), 0.0));
    bars.relay_bar = bars.rate_bar;
    const double value = loss(b.report, bars);

    const LinkModel::StrategyGrad sg = model.vjp(b.strategy, bars.rate_bar, bars.relay_bar);
    const RawReadout rg = decode_readout_backward(b.raw, cfg, sg);
    Tape &tape = *run.tape;
    tape.seed(run.phase1.theta, rg.theta1);
    tape.seed(run.phase1.beams, rg.G);
    tape.seed(b.readout.theta, rg.theta2);
    tape.seed(b.readout.beams, rg.F);
    tape.backward(grad);

    if (out)
        *out = {std::move(b.strategy), std::move(b.report)};
    return value;
}

} // namespace risdf
