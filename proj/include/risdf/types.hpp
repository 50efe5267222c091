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

#ifndef RISDF_TYPES_HPP
#define RISDF_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace risdf
{

using cdouble = std::complex<double>;
using CMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cdouble, Eigen::Dynamic, 1>;
using RVector = Eigen::VectorXd;

// Deterministic random stream. Independent sub-streams are derived from
// (seed, index) so per-sample generation does not depend on evaluation order.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                          0x5249u, 0x5344u};
        engine_.seed(seq);
    }

    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double mean = 0.0, double stddev = 1.0)
    {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    // Zero-mean complex Gaussian with E|z|^2 = 1.
    cdouble complex_normal()
    {
        constexpr double s = 0.70710678118654752440;
        double re = normal(0.0, s);
        double im = normal(0.0, s);
        return {re, im};
    }
    std::uint64_t integer(std::uint64_t n)
    {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }
    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace risdf

#endif
