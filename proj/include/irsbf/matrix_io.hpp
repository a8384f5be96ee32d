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

#ifndef IRSBF_MATRIX_IO_HPP
#define IRSBF_MATRIX_IO_HPP

#include "irsbf/channels.hpp"
#include "irsbf/sdp.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace irsbf
{
    // Binary matrix container (little-endian):
    //   "IRSBFMAT" | u32 version = 1 | u32 count
    //   per matrix: u32 name length | name bytes | u64 rows | u64 cols | rows*cols x (f64 re, f64 im), column-major
    struct NamedMatrix
    {
        std::string name;
        CMat value;
    };

    void write_matrices(std::ostream &os, const std::vector<NamedMatrix> &mats);
    std::vector<NamedMatrix> read_matrices(std::istream &is);

    void write_matrices(const std::string &path, const std::vector<NamedMatrix> &mats);
    std::vector<NamedMatrix> read_matrices(const std::string &path);

    // Raw links when present (U1, U2, D, G1, G2), otherwise the cascaded R1_k / R2_k.
    std::vector<NamedMatrix> channel_set_matrices(const ChannelSet &chs);
    ChannelSet channel_set_from_matrices(const std::vector<NamedMatrix> &mats);

    // q_k (one per user), qbar and noise (as a K x 1 matrix).
    std::vector<NamedMatrix> instance_matrices(const MaxMinSdpInstance &inst);
    MaxMinSdpInstance instance_from_matrices(const std::vector<NamedMatrix> &mats);
}

#endif
