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
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>

using namespace risdf;
using doctest::Approx;

TEST_CASE("phase atoms: quarter turns are exact, others on the unit circle")
{
    CHECK(phase_atom(0, 2) == cdouble(1.0, 0.0));
    CHECK(phase_atom(1, 2) == cdouble(0.0, 1.0));
    CHECK(phase_atom(2, 2) == cdouble(-1.0, 0.0));
    CHECK(phase_atom(3, 2) == cdouble(0.0, -1.0));
    CHECK(phase_atom(-1, 2) == cdouble(0.0, -1.0));
    CHECK(phase_atom(1, 1) == cdouble(-1.0, 0.0));
    for (int b = 0; b < 8; ++b)
    {
        CHECK(std::abs(phase_atom(b, 3)) == Approx(1.0).epsilon(1e-15));
        CHECK(std::arg(phase_atom(b, 3) * std::polar(1.0, -std::numbers::pi * b / 4.0)) ==
              Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("quantization picks the nearest atom")
{
    Rng rng(3);
    for (int B = 1; B <= 4; ++B)
        for (int t = 0; t < 500; ++t)
        {
            const cdouble z = std::polar(rng.uniform(0.1, 3.0), rng.uniform(-4.0, 4.0));
            const cdouble q = quantize_phase(z, B);
            CHECK(distance_to_phase_set(q, B) == 0.0);
            // No atom is strictly closer in angle.
            const cdouble u = z / std::abs(z);
            for (int b = 0; b < (1 << B); ++b)
                CHECK(std::abs(u - q) <= std::abs(u - phase_atom(b, B)) + 1e-12);
        }
}

TEST_CASE("quantization midpoint goes to the lower angle")
{
    CHECK(quantize_phase({1.0, 1.0}, 2) == cdouble(1.0, 0.0));
    CHECK(quantize_phase({0.0, 1.0}, 1) == cdouble(1.0, 0.0));
    CHECK(quantize_phase({0.0, 0.0}, 2) == cdouble(1.0, 0.0));
    CHECK_THROWS_AS(quantize_phase({1.0, 0.0}, 0), DomainError);
}

TEST_CASE("unit phase and beam normalization")
{
    CHECK(unit_phase(3.0, 4.0) == cdouble(0.6, 0.8));
    CHECK(unit_phase(0.0, 0.0) == cdouble(1.0, 0.0));
    CHECK(unit_phase(-1e-300, 0.0) == cdouble(-1.0, 0.0));

    CMatrix X(2, 2);
    X << cdouble(1, 1), cdouble(0, 2), cdouble(3, 0), cdouble(-1, 0);
    CHECK(normalize_beamforming(X, 20.0));
    CHECK(X.squaredNorm() == Approx(20.0).epsilon(1e-14));
    CMatrix Z = CMatrix::Zero(2, 3);
    CHECK_FALSE(normalize_beamforming(Z, 20.0));
    CHECK(Z.isZero());
    CHECK_THROWS_AS(normalize_beamforming(X, 0.0), DomainError);
}

namespace
{

RawReadout random_raw(const SystemConfig &c, Rng &rng)
{
    RawReadout r;
    auto fill = [&](Eigen::MatrixXd &m, int rows, int cols)
    {
        m.resize(rows, cols);
        for (Eigen::Index e = 0; e < m.size(); ++e)
            m(e) = rng.normal();
    };
    fill(r.theta1, 2 * c.N, c.I);
    fill(r.theta2, 2 * c.N, c.I);
    fill(r.G, 2 * c.M, c.num_users());
    fill(r.F, 2 * c.L, c.num_users());
    return r;
}

} // namespace

TEST_CASE("decoded strategies satisfy power and phase constraints exactly")
{
    const SystemConfig c = SystemConfig::desk_defaults();
    const auto real = testing::make_data(c, 1).front();
    Rng rng(5);
    for (int t = 0; t < 50; ++t)
    {
        const Strategy s = decode_readout(random_raw(c, rng), c, true, {0, 1});
        CHECK(std::abs(s.G.squaredNorm() - c.P_bs_max) <= 1e-9 * c.P_bs_max);
        CHECK(std::abs(s.F.squaredNorm() - c.P_r_max) <= 1e-9 * c.P_r_max);
        CHECK(check_constraints(real, s, c).c5_phases.satisfied);
        for (const auto &th : s.theta1)
            for (Eigen::Index n = 0; n < th.size(); ++n)
                CHECK(distance_to_phase_set(th(n), c.B) == 0.0);
    }
}

TEST_CASE("frozen phases decode to all-ones")
{
    SystemConfig c = SystemConfig::desk_defaults();
    c.freeze_theta1 = true;
    Rng rng(1);
    const Strategy s = decode_readout(random_raw(c, rng), c, false, {0, 0});
    CHECK(s.theta1[1] == CVector::Ones(c.N));
    CHECK(s.theta2[1] != CVector::Ones(c.N));
}

TEST_CASE("zero beam readout is flagged")
{
    const SystemConfig c = SystemConfig::desk_defaults();
    Rng rng(1);
    RawReadout r = random_raw(c, rng);
    r.F.setZero();
    DecodeFlags flags;
    const Strategy s = decode_readout(r, c, false, {0, 0}, &flags);
    CHECK(flags.relay_degenerate);
    CHECK_FALSE(flags.bs_degenerate);
    CHECK(std::isfinite(s.F.norm()));
    r.G.resize(1, 1);
    CHECK_THROWS_AS(decode_readout(r, c, false, {0, 0}), DomainError);
}

TEST_CASE("decode backward matches central differences")
{
    for (bool frozen : {false, true})
    {
        SystemConfig c = testing::tiny_config();
        c.freeze_theta2 = frozen;
        Rng rng(8);
        RawReadout raw = random_raw(c, rng);
        const std::vector<int> assign{0, 1};

        // f = sum Re(conj(W) x) over every decoded entry has gradient W.
        LinkModel::StrategyGrad W;
        auto rand_c = [&](Eigen::Index r, Eigen::Index cols)
        {
            CMatrix m(r, cols);
            for (Eigen::Index e = 0; e < m.size(); ++e)
                m(e) = rng.complex_normal();
            return m;
        };
        W.G = rand_c(c.M, c.num_users());
        W.F = rand_c(c.L, c.num_users());
        for (int i = 0; i < c.I; ++i)
        {
            W.theta1.push_back(rand_c(c.N, 1));
            W.theta2.push_back(rand_c(c.N, 1));
        }
        auto f = [&](const RawReadout &r)
        {
            const Strategy s = decode_readout(r, c, false, assign);
            double v = (W.G.conjugate().cwiseProduct(s.G)).sum().real() +
                       (W.F.conjugate().cwiseProduct(s.F)).sum().real();
            for (int i = 0; i < c.I; ++i)
                v += W.theta1[i].conjugate().cwiseProduct(s.theta1[i]).sum().real() +
                     W.theta2[i].conjugate().cwiseProduct(s.theta2[i]).sum().real();
            return v;
        };
        const RawReadout g = decode_readout_backward(raw, c, W);
        const double h = 1e-6;
        auto check_block = [&](Eigen::MatrixXd RawReadout::*member)
        {
            Eigen::MatrixXd &m = raw.*member;
            for (Eigen::Index e = 0; e < m.size(); ++e)
            {
                const double keep = m(e);
                m(e) = keep + h;
                const double fp = f(raw);
                m(e) = keep - h;
                const double fm = f(raw);
                m(e) = keep;
                CHECK((g.*member)(e) == Approx((fp - fm) / (2 * h)).epsilon(1e-6).scale(1.0));
            }
        };
        check_block(&RawReadout::theta1);
        check_block(&RawReadout::theta2);
        check_block(&RawReadout::G);
        check_block(&RawReadout::F);
        if (frozen)
            CHECK(g.theta2.isZero());
    }
}
