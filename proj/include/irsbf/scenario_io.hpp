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

#ifndef IRSBF_SCENARIO_IO_HPP
#define IRSBF_SCENARIO_IO_HPP

#include "irsbf/channels.hpp"

#include "json.hpp"

#include <map>
#include <set>
#include <string>

namespace irsbf
{
    using json = nlohmann::json;

    // Configuration error carrying the source position (line 0 when unknown).
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(const std::string &origin, int line, int column, const std::string &msg);
        int line() const { return line_; }
        int column() const { return column_; }

    private:
        int line_ = 0;
        int column_ = 0;
    };

    // Parsed JSON plus the line on which every value starts, keyed by JSON pointer.
    struct JsonDocument
    {
        json value;
        std::string origin;
        std::map<std::string, int> lines;

        int line_of(const std::string &pointer) const;
        [[noreturn]] void fail(const std::string &pointer, const std::string &msg) const;

        const json &at(const std::string &pointer) const { return value.at(json::json_pointer(pointer)); }
        bool has(const std::string &pointer) const { return value.contains(json::json_pointer(pointer)); }

        double number(const std::string &pointer) const;
        std::uint64_t unsigned_integer(const std::string &pointer) const;
        std::string string(const std::string &pointer) const;
        std::vector<double> numbers(const std::string &pointer) const; // a number or an array of numbers

        // Rejects members of the object at `pointer` not listed in `allowed`.
        void only_keys(const std::string &pointer, const std::set<std::string> &allowed) const;
    };

    // Throws ConfigError with line and column on syntax errors.
    JsonDocument parse_json_document(const std::string &text, const std::string &origin);
    JsonDocument load_json_document(const std::string &path);

    // Applies the scenario object at `pointer` on top of `s` (dB / dBm converted to linear here) and validates.
    void apply_scenario_json(SystemScenario &s, const JsonDocument &doc, const std::string &pointer = "");

    json scenario_to_json(const SystemScenario &s);

    SystemScenario load_scenario(const std::string &path, const SystemScenario &base = SystemScenario{});
}

#endif
