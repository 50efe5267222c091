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

#ifndef RISDF_BINARY_IO_HPP
#define RISDF_BINARY_IO_HPP

#include "risdf/channel.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace risdf
{

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

// Little-endian byte buffer writer.
class ByteWriter
{
public:
    void bytes(const void *p, std::size_t n)
    {
        const auto *c = static_cast<const char *>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    void u32(std::uint32_t v) { bytes(&v, sizeof(v)); }
    void u64(std::uint64_t v) { bytes(&v, sizeof(v)); }
    void f64(double v) { bytes(&v, sizeof(v)); }
    void str(const std::string &s)
    {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }

    const std::vector<char> &data() const { return buf_; }

    void to_file(const std::string &path, const std::string &what) const
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw FormatError(what + ": cannot open '" + path + "' for writing");
        out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!out)
            throw FormatError(what + ": write to '" + path + "' failed");
    }

private:
    std::vector<char> buf_;
};

// Bounds-checked reader; every read names the field it was reading on failure.
class ByteReader
{
public:
    explicit ByteReader(std::vector<char> buf, std::string what) : buf_(std::move(buf)), what_(std::move(what)) {}

    static ByteReader from_file(const std::string &path, const std::string &what)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw FormatError(what + ": cannot open '" + path + "'");
        std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return ByteReader(std::move(buf), what);
    }

    void bytes(void *p, std::size_t n, const char *field)
    {
        if (pos_ + n > buf_.size())
            throw FormatError(what_ + ": truncated while reading field '" + field + "'");
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32(const char *field)
    {
        std::uint32_t v;
        bytes(&v, sizeof(v), field);
        return v;
    }
    std::uint64_t u64(const char *field)
    {
        std::uint64_t v;
        bytes(&v, sizeof(v), field);
        return v;
    }
    double f64(const char *field)
    {
        double v;
        bytes(&v, sizeof(v), field);
        return v;
    }
    std::string str(const char *field)
    {
        std::uint32_t n = u32(field);
        if (n > remaining())
            throw FormatError(what_ + ": truncated while reading field '" + field + "'");
        std::string s(n, '\0');
        bytes(s.data(), n, field);
        return s;
    }

    std::size_t remaining() const { return buf_.size() - pos_; }

private:
    std::vector<char> buf_;
    std::string what_;
    std::size_t pos_ = 0;
};

} // namespace risdf

#endif
