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

#include "risdf/binary_io.hpp"
#include "risdf/channel.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace risdf
{

namespace
{

constexpr char kMagic[7] = {'R', 'I', 'S', 'D', 'F', '0', '1'};
constexpr std::uint32_t kVersion = 1;

void write_matrix(ByteWriter &w, const CMatrix &m)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            w.f64(m(r, c).real());
            w.f64(m(r, c).imag());
        }
}

CMatrix read_matrix(ByteReader &rd, int rows, int cols, const char *field)
{
    CMatrix m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
        {
            double re = rd.f64(field);
            double im = rd.f64(field);
            m(r, c) = {re, im};
        }
    return m;
}

DatasetDims read_header(ByteReader &rd, std::uint64_t &count)
{
    char magic[7];
    rd.bytes(magic, sizeof(magic), "magic");
    if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
        throw FormatError("dataset: bad magic (expected RISDF01)");
    std::uint32_t version = rd.u32("version");
    if (version != kVersion)
        throw FormatError("dataset: unsupported version " + std::to_string(version));
    DatasetDims d;
    d.M = static_cast<int>(rd.u32("M"));
    d.N = static_cast<int>(rd.u32("N"));
    d.L = static_cast<int>(rd.u32("L"));
    d.J = static_cast<int>(rd.u32("J"));
    d.I = static_cast<int>(rd.u32("I"));
    d.K = static_cast<int>(rd.u32("K"));
    count = rd.u64("count");
    const int *dims[] = {&d.M, &d.N, &d.L, &d.J, &d.I, &d.K};
    const char *names[] = {"M", "N", "L", "J", "I", "K"};
    for (int idx = 0; idx < 6; ++idx)
        if (*dims[idx] < 1 || *dims[idx] > (1 << 20))
            throw FormatError(std::string("dataset: header field ") + names[idx] + " out of range");
    return d;
}

std::vector<ChannelRealization> read_all(const std::string &path, const SystemConfig *expect)
{
    ByteReader rd = ByteReader::from_file(path, "dataset");
    std::uint64_t count = 0;
    DatasetDims d = read_header(rd, count);
    if (expect)
    {
        const std::pair<const char *, std::pair<int, int>> checks[] = {
            {"M", {d.M, expect->M}}, {"N", {d.N, expect->N}}, {"L", {d.L, expect->L}},
            {"J", {d.J, expect->J}}, {"I", {d.I, expect->I}}, {"K", {d.K, expect->K}}};
        for (const auto &[name, v] : checks)
            if (v.first != v.second)
                throw FormatError(std::string("dataset: shape mismatch in field ") + name + ": file has " +
                                  std::to_string(v.first) + ", config expects " + std::to_string(v.second));
    }

    const std::uint64_t per_sample =
        8ull * (2ull * (static_cast<std::uint64_t>(d.I) * d.M * d.N + static_cast<std::uint64_t>(d.J) * d.M * d.L +
                        static_cast<std::uint64_t>(d.I) * d.K * d.M + static_cast<std::uint64_t>(d.I) * d.K * d.N +
                        static_cast<std::uint64_t>(d.I) * d.J * d.N * d.L +
                        static_cast<std::uint64_t>(d.J) * d.I * d.K * d.L) +
                2ull * d.I * d.K);
    if (rd.remaining() != per_sample * count)
        throw FormatError("dataset: payload size " + std::to_string(rd.remaining()) + " does not match header (" +
                          std::to_string(count) + " samples of " + std::to_string(per_sample) + " bytes)");

    const auto I = static_cast<std::size_t>(d.I), J = static_cast<std::size_t>(d.J),
               K = static_cast<std::size_t>(d.K);
    std::vector<ChannelRealization> out;
    out.reserve(count);
    for (std::uint64_t s = 0; s < count; ++s)
    {
        ChannelRealization r;
        for (std::size_t i = 0; i < I; ++i)
            r.G_bs_ris.push_back(read_matrix(rd, d.M, d.N, "G_bs_ris"));
        for (std::size_t j = 0; j < J; ++j)
            r.H_bs_relay.push_back(read_matrix(rd, d.M, d.L, "H_bs_relay"));
        r.h_bs_user.resize(I);
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t k = 0; k < K; ++k)
                r.h_bs_user[i].push_back(read_matrix(rd, d.M, 1, "h_bs_user"));
        r.h_ris_user.resize(I);
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t k = 0; k < K; ++k)
                r.h_ris_user[i].push_back(read_matrix(rd, d.N, 1, "h_ris_user"));
        r.H_ris_relay.resize(I);
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
                r.H_ris_relay[i].push_back(read_matrix(rd, d.N, d.L, "H_ris_relay"));
        r.h_relay_user.assign(J, std::vector<std::vector<CVector>>(I));
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t i = 0; i < I; ++i)
                for (std::size_t k = 0; k < K; ++k)
                    r.h_relay_user[j][i].push_back(read_matrix(rd, d.L, 1, "h_relay_user"));
        r.user_pos.assign(I, std::vector<Point2>(K));
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t k = 0; k < K; ++k)
            {
                double x = rd.f64("user_pos");
                double y = rd.f64("user_pos");
                r.user_pos[i][k] = {x, y};
            }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace

void save_dataset(const std::vector<ChannelRealization> &data, const std::string &path)
{
    ByteWriter w;
    w.bytes(kMagic, sizeof(kMagic));
    w.u32(kVersion);
    DatasetDims d;
    if (!data.empty())
    {
        const ChannelRealization &f = data.front();
        d = {f.M(), f.N(), f.L(), f.J(), f.I(), f.K()};
    }
    for (int v : {d.M, d.N, d.L, d.J, d.I, d.K})
        w.u32(static_cast<std::uint32_t>(v));
    w.u64(data.size());
    if (data.empty())
        throw FormatError("dataset: refusing to write an empty dataset (dimensions undefined)");

    for (const auto &r : data)
    {
        if (r.M() != d.M || r.N() != d.N || r.L() != d.L || r.J() != d.J || r.I() != d.I || r.K() != d.K)
            throw FormatError("dataset: realizations have inconsistent dimensions");
        for (const auto &m : r.G_bs_ris)
            write_matrix(w, m);
        for (const auto &m : r.H_bs_relay)
            write_matrix(w, m);
        for (const auto &g : r.h_bs_user)
            for (const auto &v : g)
                write_matrix(w, v);
        for (const auto &g : r.h_ris_user)
            for (const auto &v : g)
                write_matrix(w, v);
        for (const auto &g : r.H_ris_relay)
            for (const auto &m : g)
                write_matrix(w, m);
        for (const auto &rel : r.h_relay_user)
            for (const auto &g : rel)
                for (const auto &v : g)
                    write_matrix(w, v);
        for (const auto &g : r.user_pos)
            for (const auto &p : g)
            {
                w.f64(p[0]);
                w.f64(p[1]);
            }
    }
    w.to_file(path, "dataset");
}

std::vector<ChannelRealization> load_dataset(const std::string &path)
{
    return read_all(path, nullptr);
}

std::vector<ChannelRealization> load_dataset(const std::string &path, const SystemConfig &cfg)
{
    return read_all(path, &cfg);
}

DatasetDims read_dataset_dims(const std::string &path)
{
    ByteReader rd = ByteReader::from_file(path, "dataset");
    std::uint64_t count = 0;
    return read_header(rd, count);
}

} // namespace risdf
