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

#ifndef IRSBF_PLOTDATA_HPP
#define IRSBF_PLOTDATA_HPP

#include <string>
#include <vector>

namespace irsbf
{
    struct SeriesPoint
    {
        double x = 0.0, y = 0.0, yerr = 0.0;
    };

    struct Series
    {
        std::string method;
        std::vector<SeriesPoint> points; // in CSV row order
    };

    // Parses an experiment CSV. Throws std::runtime_error ("line N: ...") on a malformed file or an empty sweep.
    std::vector<Series> parse_results_csv(const std::string &text);

    // One file per method, <out_dir>/<prefix>_<method>.dat, rows "x y yerr". Nothing is written on error.
    std::vector<std::string> emit_plotdata(const std::string &csv_path, const std::string &out_dir,
                                           const std::string &prefix = "");
}

#endif
