// SPDX-License-Identifier: Apache-2.0
//
// nfcrb - wideband compressed-domain Cramer-Rao bounds for near-field arrays
// Copyright (C) 2026 The nfcrb authors
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

#include "cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace nfcrb::cli {

namespace fs = std::filesystem;

std::string format_double(double v)
{
    if (!std::isfinite(v)) {
        return {};
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string escape(const std::string &s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string render(const CsvCell &cell)
{
    if (const auto *d = std::get_if<double>(&cell)) {
        return format_double(*d);
    }
    if (const auto *i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    return escape(std::get<std::string>(cell));
}

} // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> row)
{
    if (row.size() != header_.size()) {
        throw std::invalid_argument("CsvTable: row has " + std::to_string(row.size()) +
                                    " cells, header has " + std::to_string(header_.size()));
    }
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const
{
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        out += (i ? "," : "") + escape(header_[i]);
    }
    out += '\n';
    for (const auto &row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += render(row[i]);
        }
        out += '\n';
    }
    return out;
}

void CsvTable::write(const fs::path &file) const
{
    write_text(file, str());
}

void prepare_output_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw OutputError("cannot create output directory '" + dir.string() + "'");
    }
    const fs::path probe = dir / ".nfcrb_write_probe";
    {
        std::ofstream out(probe);
        if (!out) {
            throw OutputError("output directory '" + dir.string() + "' is not writable");
        }
    }
    fs::remove(probe, ec);
}

void write_text(const fs::path &file, const std::string &text)
{
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw OutputError("cannot write '" + file.string() + "'");
    }
    out << text;
    if (!out) {
        throw OutputError("write failed for '" + file.string() + "'");
    }
}

void write_json(const fs::path &file, const nlohmann::json &j)
{
    write_text(file, j.dump(2) + "\n");
}

nlohmann::json json_number(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

} // namespace nfcrb::cli
