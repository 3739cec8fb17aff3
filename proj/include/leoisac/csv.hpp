// SPDX-License-Identifier: Apache-2.0
//
// leoisac: bistatic LEO integrated sensing and communication toolkit
// Copyright (C) 2026 The leoisac Authors
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

#ifndef LEOISAC_CSV_HPP
#define LEOISAC_CSV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace leoisac
{
    // Comma-separated table with a mandatory header row. Numbers are written with 17 significant digits so
    // that reading a file back recovers every double exactly.
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        explicit CsvTable(std::vector<std::string> columns = {});

        CsvTable &row(std::vector<std::string> cells);
        std::size_t column(const std::string &name) const; // throws std::out_of_range
        double number(std::size_t row, const std::string &name) const;
        const std::string &text(std::size_t row, const std::string &name) const;

        std::string str() const;
        void write(const std::string &path) const;
        static CsvTable parse(const std::string &text);
        static CsvTable read(const std::string &path);
    };

    std::string cell(double v);
    std::string cell(int v);
    std::string cell(long long v);
    std::string cell(std::uint64_t v);
    inline std::string cell(std::string v) { return v; }
    inline std::string cell(const char *v) { return v; }
}

#endif
