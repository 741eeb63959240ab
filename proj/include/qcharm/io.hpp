// Copyright 2026 The qcharm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "qcharm/mitigation.hpp"
#include "qcharm/pauli.hpp"
#include "qcharm/quarkmodel.hpp"
#include "qcharm/simulator.hpp"

namespace qcharm::io {

using json = nlohmann::ordered_json;

/// Input that could not be parsed or validated; `line` is 1-based, 0 if unknown.
class FormatError : public std::runtime_error {
  public:
    FormatError(const std::string& what, std::size_t line = 0);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Shortest of fixed/scientific with `digits` significant digits, "C" locale.
std::string format_double(double v, int digits = 9);

using CsvCell = std::variant<std::string, double, std::int64_t>;

/// Comma-separated table with a header line; doubles use format_double.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header, int digits = 9);
    CsvTable& row(std::vector<CsvCell> cells);
    std::string str() const;
    std::size_t size() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::string> rows_;
    int digits_;
};

json to_json(const HamiltonianMatrix& m);
HamiltonianMatrix matrix_from_json(const json& j);

json to_json(const PauliSum& s);
PauliSum pauli_from_json(const json& j);

json to_json(const NoiseModel& n);
NoiseModel noise_from_json(const json& j);

json to_json(const CalibrationMatrix& c);

/// Parses text as JSON, turning parse errors into FormatError with a line number.
json parse_json(std::string_view text);
json read_json(const std::filesystem::path& p);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);
/// Pretty JSON with two-space indentation and a trailing newline.
std::string dump(const json& j);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace qcharm::io
