// SPDX-License-Identifier: Apache-2.0
//
// irsbf: cooperative passive beamforming for double-IRS assisted uplinks
// Copyright (C) 2026 The irsbf authors
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

#include "irsbf/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

namespace irsbf
{
    static_assert(std::endian::native == std::endian::little, "matrix container I/O assumes a little-endian host");

    static constexpr char kMagic[8] = {'I', 'R', 'S', 'B', 'F', 'M', 'A', 'T'};
    static constexpr std::uint32_t kVersion = 1;

    template <typename T>
    static void put(std::ostream &os, T v)
    {
        os.write(reinterpret_cast<const char *>(&v), sizeof(T));
    }

    template <typename T>
    static T get(std::istream &is)
    {
        T v{};
        if (!is.read(reinterpret_cast<char *>(&v), sizeof(T)))
            throw std::runtime_error("matrix container: unexpected end of data.");
        return v;
    }

    void write_matrices(std::ostream &os, const std::vector<NamedMatrix> &mats)
    {
        os.write(kMagic, sizeof(kMagic));
        put<std::uint32_t>(os, kVersion);
        put<std::uint32_t>(os, std::uint32_t(mats.size()));
        for (const NamedMatrix &m : mats)
        {
            put<std::uint32_t>(os, std::uint32_t(m.name.size()));
            os.write(m.name.data(), std::streamsize(m.name.size()));
            put<std::uint64_t>(os, m.value.n_rows);
            put<std::uint64_t>(os, m.value.n_cols);
            // std::complex<double> is layout-compatible with double[2].
            os.write(reinterpret_cast<const char *>(m.value.memptr()), std::streamsize(m.value.n_elem * sizeof(cx)));
        }
        if (!os)
            throw std::runtime_error("matrix container: write failed.");
    }

    std::vector<NamedMatrix> read_matrices(std::istream &is)
    {
        char magic[8];
        if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
            throw std::runtime_error("matrix container: bad magic.");
        const auto version = get<std::uint32_t>(is);
        if (version != kVersion)
            throw std::runtime_error("matrix container: unsupported version " + std::to_string(version) + ".");
        const auto count = get<std::uint32_t>(is);
        std::vector<NamedMatrix> out;
        for (std::uint32_t i = 0; i < count; ++i)
        {
            NamedMatrix m;
            const auto len = get<std::uint32_t>(is);
            if (len > (1u << 16))
                throw std::runtime_error("matrix container: implausible name length.");
            m.name.resize(len);
            if (len > 0 && !is.read(m.name.data(), len))
                throw std::runtime_error("matrix container: unexpected end of data.");
            const auto rows = get<std::uint64_t>(is);
            const auto cols = get<std::uint64_t>(is);
            if (rows > (1ull << 24) || cols > (1ull << 24) || rows * cols > (1ull << 28))
                throw std::runtime_error("matrix container: implausible dimensions for '" + m.name + "'.");
            m.value.set_size(rows, cols);
            if (m.value.n_elem > 0 &&
                !is.read(reinterpret_cast<char *>(m.value.memptr()), std::streamsize(m.value.n_elem * sizeof(cx))))
                throw std::runtime_error("matrix container: unexpected end of data.");
            out.push_back(std::move(m));
        }
        return out;
    }

    void write_matrices(const std::string &path, const std::vector<NamedMatrix> &mats)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open '" + path + "' for writing.");
        write_matrices(os, mats);
    }

    std::vector<NamedMatrix> read_matrices(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw std::runtime_error("cannot open '" + path + "'.");
        return read_matrices(is);
    }

    static const CMat &find(const std::map<std::string, const CMat *> &idx, const std::string &name)
    {
        auto it = idx.find(name);
        if (it == idx.end())
            throw std::runtime_error("matrix container: missing '" + name + "'.");
        return *it->second;
    }

    static std::map<std::string, const CMat *> index_of(const std::vector<NamedMatrix> &mats)
    {
        std::map<std::string, const CMat *> idx;
        for (const NamedMatrix &m : mats)
            idx[m.name] = &m.value;
        return idx;
    }

    std::vector<NamedMatrix> channel_set_matrices(const ChannelSet &chs)
    {
        if (chs.has_raw_links())
            return {{"U1", chs.U1}, {"U2", chs.U2}, {"D", chs.D}, {"G1", chs.G1}, {"G2", chs.G2}};
        std::vector<NamedMatrix> out;
        for (uword k = 0; k < chs.n_users; ++k)
        {
            out.push_back({"R1_" + std::to_string(k), chs.R1[k]});
            out.push_back({"R2_" + std::to_string(k), chs.R2[k]});
        }
        return out;
    }

    ChannelSet channel_set_from_matrices(const std::vector<NamedMatrix> &mats)
    {
        const auto idx = index_of(mats);
        if (idx.count("G2"))
            return ChannelSet::from_links(find(idx, "U1"), find(idx, "U2"), find(idx, "D"), find(idx, "G1"),
                                          find(idx, "G2"));
        std::vector<CMat> R1, R2;
        for (uword k = 0; idx.count("R2_" + std::to_string(k)); ++k)
        {
            R1.push_back(find(idx, "R1_" + std::to_string(k)));
            R2.push_back(find(idx, "R2_" + std::to_string(k)));
        }
        if (R2.empty())
            throw std::runtime_error("matrix container: no channel matrices found.");
        return ChannelSet::from_cascaded(std::move(R1), std::move(R2));
    }

    std::vector<NamedMatrix> instance_matrices(const MaxMinSdpInstance &inst)
    {
        std::vector<NamedMatrix> out;
        for (uword k = 0; k < inst.n_users(); ++k)
            out.push_back({"q_" + std::to_string(k), inst.q[k]});
        out.push_back({"qbar", inst.qbar});
        out.push_back({"noise", arma::conv_to<CMat>::from(arma::mat(inst.noise))});
        return out;
    }

    MaxMinSdpInstance instance_from_matrices(const std::vector<NamedMatrix> &mats)
    {
        const auto idx = index_of(mats);
        MaxMinSdpInstance inst;
        for (uword k = 0; idx.count("q_" + std::to_string(k)); ++k)
            inst.q.push_back(find(idx, "q_" + std::to_string(k)));
        inst.qbar = find(idx, "qbar");
        inst.noise = arma::real(arma::vectorise(find(idx, "noise")));
        inst.validate();
        return inst;
    }
}
