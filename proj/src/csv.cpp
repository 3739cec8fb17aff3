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

#include "leoisac/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leoisac
{
    namespace
    {
        std::vector<std::string> split_line(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cur;
            for (char ch : line)
            {
                if (ch == ',')
                {
                    out.push_back(cur);
                    cur.clear();
                }
                else if (ch != '\r')
                    cur.push_back(ch);
            }
            out.push_back(cur);
            return out;
        }
    }

    std::string cell(double v) { return fmt::format("{:.17g}", v); }
    std::string cell(int v) { return fmt::format("{}", v); }
    std::string cell(long long v) { return fmt::format("{}", v); }
    std::string cell(std::uint64_t v) { return fmt::format("{}", v); }

    CsvTable::CsvTable(std::vector<std::string> columns) : header(std::move(columns)) {}

    CsvTable &CsvTable::row(std::vector<std::string> cells)
    {
        if (cells.size() != header.size())
            throw std::invalid_argument(fmt::format("CSV row has {} cells, header has {}", cells.size(), header.size()));
        for (const auto &c : cells)
            if (c.find_first_of(",\n") != std::string::npos)
                throw std::invalid_argument("CSV cell contains a separator: " + c);
        rows.push_back(std::move(cells));
        return *this;
    }

    std::size_t CsvTable::column(const std::string &name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw std::out_of_range("no CSV column '" + name + "'");
    }

    double CsvTable::number(std::size_t r, const std::string &name) const
    {
        return std::stod(rows.at(r).at(column(name)));
    }

    const std::string &CsvTable::text(std::size_t r, const std::string &name) const
    {
        return rows.at(r).at(column(name));
    }

    std::string CsvTable::str() const
    {
        if (header.empty())
            throw std::invalid_argument("CSV header is mandatory");
        std::string out;
        auto line = [&out](const std::vector<std::string> &cells) {
            for (std::size_t i = 0; i < cells.size(); ++i)
            {
                if (i)
                    out.push_back(',');
                out += cells[i];
            }
            out.push_back('\n');
        };
        line(header);
        for (const auto &r : rows)
            line(r);
        return out;
    }

    void CsvTable::write(const std::string &path) const
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write '" + path + "'");
        f << str();
        if (!f)
            throw std::runtime_error("write failed for '" + path + "'");
    }

    CsvTable CsvTable::parse(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        if (!std::getline(in, line) || line.empty())
            throw std::invalid_argument("CSV has no header row");
        CsvTable t(split_line(line));
        while (std::getline(in, line))
            if (!line.empty())
                t.row(split_line(line));
        return t;
    }

    CsvTable CsvTable::read(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot read '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }
}
