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


#include "risdf/nn.hpp"
#include "risdf/types.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace risdf;
using doctest::Approx;

namespace
{

RMatrix random_matrix(int r, int c, Rng &rng)
{
    RMatrix m(r, c);
    for (Eigen::Index e = 0; e < m.size(); ++e)
        m(e) = rng.normal();
    return m;
}

double silu(double x)
{
    return x / (1.0 + std::exp(-x));
}

// Builds a graph from (params, input) and returns the output node; the test
// objective is sum(W .* output).
using Graph = std::function<int(Tape &, int input)>;

void check_gradients(const ParamSet &ps, const RMatrix &x0, const Graph &graph, std::uint64_t seed)
{
    Rng rng(seed);
    RMatrix W;
    auto objective = [&](const RVector &p, const RMatrix &x)
    {
        Tape t(p);
        const int out = graph(t, t.constant(x));
        if (W.size() == 0)
            W = random_matrix(t.rows(out), static_cast<int>(t.value(out).cols()), rng);
        return (W.array() * t.value(out).array()).sum();
    };
    objective(ps.values, x0);

    Tape t(ps.values);
    const int in = t.constant(x0);
    const int out = graph(t, in);
    t.seed(out, W);
    RVector pg = RVector::Zero(ps.values.size());
    t.backward(pg);

    const double h = 1e-6;
    RVector p = ps.values;
    for (Eigen::Index e = 0; e < p.size(); ++e)
    {
        const double keep = p(e);
        p(e) = keep + h;
        const double fp = objective(p, x0);
        p(e) = keep - h;
        const double fm = objective(p, x0);
        p(e) = keep;
        CHECK(pg(e) == Approx((fp - fm) / (2 * h)).epsilon(1e-6).scale(1.0));
    }
}

} // namespace

TEST_CASE("parameter layout")
{
    ParamSet ps;
    const DenseStack &a = ps.add_stack("a", 3, 5, 2, 4);
    CHECK(a.layers.size() == 3);
    CHECK(a.in() == 3);
    CHECK(a.out() == 4);
    CHECK(a.layers[0].activation);
    CHECK_FALSE(a.layers[2].activation);
    const DenseStack &b = ps.add_stack("b", 2, 9, 0, 1);
    CHECK(b.layers.size() == 1);
    CHECK(ps.size() == (3 * 5 + 5) + (5 * 5 + 5) + (5 * 4 + 4) + (2 + 1));
    CHECK(ps.stack("b").layers[0].offset == ps.size() - 3);
    CHECK_THROWS(ps.stack("c"));
}

TEST_CASE("init: Glorot bounds, zero biases, seeded")
{
    ParamSet ps;
    ps.add_stack("a", 30, 20, 1, 10);
    ps.init(4);
    const RVector first = ps.values;
    ps.init(4);
    CHECK(ps.values == first);
    ps.init(5);
    CHECK(ps.values != first);
    for (const auto &l : ps.stack("a").layers)
    {
        const double limit = std::sqrt(6.0 / (l.in + l.out));
        for (int w = 0; w < l.in * l.out; ++w)
            CHECK(std::abs(ps.values(static_cast<Eigen::Index>(l.offset) + w)) <= limit);
        for (int b = 0; b < l.out; ++b)
            CHECK(ps.values(static_cast<Eigen::Index>(l.offset) + l.in * l.out + b) == 0.0);
    }
}

TEST_CASE("dense forward matches a hand computation")
{
    ParamSet ps;
    ps.add_stack("s", 2, 2, 1, 1);
    ps.values.resize(static_cast<Eigen::Index>(ps.size()));
    // W1 = [[1, 2], [3, 4]], b1 = [0.5, -1], W2 = [1, -1], b2 = 0.25
    ps.values << 1, 2, 3, 4, 0.5, -1, 1, -1, 0.25;
    Tape t(ps.values);
    RMatrix x(2, 2);
    x << 1, -1, 0.5, 2;
    const int y = t.dense(t.constant(x), ps.stack("s"));
    for (int c = 0; c < 2; ++c)
    {
        const double h0 = silu(1 * x(0, c) + 2 * x(1, c) + 0.5);
        const double h1 = silu(3 * x(0, c) + 4 * x(1, c) - 1.0);
        CHECK(t.value(y)(0, c) == Approx(h0 - h1 + 0.25).epsilon(1e-14));
    }
}

TEST_CASE("structural ops")
{
    Tape t(RVector{});
    RMatrix a(2, 3), b(1, 3);
    a << 1, 5, 3, -2, 0, 4;
    b << 7, 8, 9;
    const int ia = t.constant(a), ib = t.constant(b);
    const RMatrix v = t.value(t.vcat({ia, ib}));
    CHECK(v.rows() == 3);
    CHECK(v(2, 1) == 8);
    const RMatrix h = t.value(t.hcat({ia, ia}));
    CHECK(h.cols() == 6);
    CHECK(h(1, 5) == 4);
    const RMatrix m = t.value(t.col_mean(ia, 1, 2));
    CHECK(m(0, 0) == 4);
    CHECK(m(1, 0) == 2);
    const RMatrix g = t.value(t.gather_cols(ia, {2, 2, 0}));
    CHECK(g(0, 0) == 3);
    CHECK(g(1, 2) == -2);

    const RMatrix mo = t.value(t.max_others(ia));
    // Row 0 = [1, 5, 3]: max over the others of each column.
    CHECK(mo(0, 0) == 5);
    CHECK(mo(0, 1) == 3);
    CHECK(mo(0, 2) == 5);
    CHECK(mo(1, 0) == 4);
    CHECK(mo(1, 2) == 0);
    const RMatrix single = t.value(t.max_others(t.constant(RMatrix::Constant(2, 1, 3.0))));
    CHECK(single.isZero());
}

TEST_CASE("max_others is a permutation-equivariant brute-force max")
{
    Rng rng(2);
    const RMatrix x = random_matrix(4, 6, rng);
    Tape t(RVector{});
    const RMatrix mo = t.value(t.max_others(t.constant(x)));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 6; ++c)
        {
            double best = -1e300;
            for (int o = 0; o < 6; ++o)
                if (o != c)
                    best = std::max(best, x(r, o));
            CHECK(mo(r, c) == best);
        }
}

TEST_CASE("backward matches central differences through every op")
{
    ParamSet ps;
    ps.add_stack("f", 3, 4, 1, 3);
    ps.add_stack("g", 6, 4, 1, 2);
    ps.init(3);
    Rng rng(6);
    for (Eigen::Index e = 0; e < ps.values.size(); ++e)
        ps.values(e) += 0.1 * rng.normal();
    const RMatrix x = random_matrix(3, 5, rng);
    check_gradients(ps, x,
                    [&](Tape &t, int in)
                    {
                        const int a = t.dense(in, ps.stack("f"));
                        const int mo = t.max_others(a);
                        const int mean = t.gather_cols(t.col_mean(a, 1, 3), {0, 0, 0, 0, 0});
                        const int mixed = t.vcat({t.hcat({t.gather_cols(a, {4, 3}), t.gather_cols(mo, {0, 1, 2})}),
                                                  mean});
                        return t.dense(mixed, ps.stack("g"));
                    },
                    1);
}

TEST_CASE("unseeded branches contribute nothing")
{
    ParamSet ps;
    ps.add_stack("f", 2, 3, 1, 2);
    ps.add_stack("g", 2, 3, 1, 2);
    ps.init(1);
    Tape t(ps.values);
    const int in = t.constant(RMatrix::Ones(2, 3));
    const int used = t.dense(in, ps.stack("f"));
    t.dense(in, ps.stack("g"));
    t.seed(used, RMatrix::Ones(2, 3));
    RVector pg = RVector::Zero(ps.values.size());
    t.backward(pg);
    const auto &g = ps.stack("g").layers;
    for (std::size_t e = g.front().offset; e < ps.size(); ++e)
        CHECK(pg(static_cast<Eigen::Index>(e)) == 0.0);
    CHECK(pg.head(static_cast<Eigen::Index>(g.front().offset)).norm() > 0.0);
}
