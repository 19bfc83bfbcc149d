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

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace nfcrb::cli {

/// 17 significant digits, '.' decimal. Non-finite values become an empty
/// string; callers that can emit them carry a separate flag column.
std::string format_double(double v);

using CsvCell = std::variant<double, std::int64_t, std::string>;

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<CsvCell> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string> &header() const { return header_; }

    std::string str() const;
    void write(const std::filesystem::path &file) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<CsvCell>> rows_;
};

/// Creates `dir` if needed and checks that a file can be created in it.
/// Throws OutputError otherwise.
void prepare_output_dir(const std::filesystem::path &dir);

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_text(const std::filesystem::path &file, const std::string &text);
void write_json(const std::filesystem::path &file, const nlohmann::json &j);

/// JSON-safe number: finite values as numbers, otherwise "inf", "-inf" or "nan".
nlohmann::json json_number(double v);

} // namespace nfcrb::cli
