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


#ifndef RISDF_READOUT_HPP
#define RISDF_READOUT_HPP

#include "risdf/config.hpp"
#include "risdf/phy.hpp"
#include "risdf/types.hpp"

#include <vector>

namespace risdf
{

// ---------- discrete phases ----------

// Atom b of the 2^B-point phase set, exp(j 2 pi b / 2^B). Quarter turns are exact.
cdouble phase_atom(int b, int B);

// Nearest atom by angular distance; an exact midpoint goes to the lower angle.
cdouble quantize_phase(cdouble theta, int B);
CVector quantize_phases(const CVector &theta, int B);

// Smallest |theta - atom| over the phase set.
double distance_to_phase_set(cdouble theta, int B);

// (a + jb) / sqrt(a^2 + b^2); the origin maps to 1.
cdouble unit_phase(double a, double b);

// Scales every column by sqrt(budget / ||X||_F^2). Returns false (and leaves X
// untouched) when X is zero.
bool normalize_beamforming(CMatrix &X, double budget);

// ---------- raw readout to strategy ----------

// Real-valued network outputs for one realization. Theta blocks are 2N x I
// (rows n and N+n are the real and imaginary parts of element n); beamformer
// blocks are 2M x U and 2L x U with the same split.
struct RawReadout
{
    Eigen::MatrixXd theta1;
    Eigen::MatrixXd theta2;
    Eigen::MatrixXd G;
    Eigen::MatrixXd F;
};

struct DecodeFlags
{
    bool bs_degenerate = false;
    bool relay_degenerate = false;
};

// Unit-modulus phases (quantized when asked), power-normalized beamformers.
// Frozen phases are all-ones.
Strategy decode_readout(const RawReadout &raw, const SystemConfig &cfg, bool quantize, const std::vector<int> &assign,
                        DecodeFlags *flags = nullptr);

// Gradient of a scalar with respect to the raw readout given its gradient with
// respect to the continuous decoded strategy.
RawReadout decode_readout_backward(const RawReadout &raw, const SystemConfig &cfg,
                                   const LinkModel::StrategyGrad &grad);

} // namespace risdf

#endif
