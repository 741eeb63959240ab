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

#include "qcharm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcharm::io {

FormatError::FormatError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string format_double(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return {buf, res.ptr};
}

CsvTable::CsvTable(std::vector<std::string> header, int digits) : header_(std::move(header)), digits_(digits) {}

CsvTable& CsvTable::row(std::vector<CsvCell> cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("csv: row width does not match header");
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, std::string>)
                    line += c;
                else if constexpr (std::is_same_v<T, double>)
                    line += format_double(c, digits_);
                else
                    line += std::to_string(c);
            },
            cells[i]);
    }
    rows_.push_back(std::move(line));
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    out += '\n';
    for (const auto& r : rows_) out += r + '\n';
    return out;
}

json to_json(const HamiltonianMatrix& m) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.entries.rows(); ++i)
        for (std::size_t k = 0; k < m.entries.cols(); ++k)
            entries.push_back({m.entries(i, k).real(), m.entries(i, k).imag()});
    return {{"dim", m.dim()},
            {"units", std::string(to_string(m.units))},
            {"entries_row_major", std::move(entries)},
            {"source", std::string(to_string(m.source))},
            {"channel", m.channel}};
}

namespace {

double number(const json& j, std::string_view what) {
    if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
    return j.get<double>();
}

cplx complex_pair(const json& j, std::string_view what) {
    if (!j.is_array() || j.size() != 2) throw FormatError(std::string(what) + " must be a [re, im] pair");
    return {number(j[0], what), number(j[1], what)};
}

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw FormatError("expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
    return *it;
}

}  // namespace

HamiltonianMatrix matrix_from_json(const json& j) {
    const auto& dim_j = field(j, "dim");
    if (!dim_j.is_number_integer() || dim_j.get<std::int64_t>() < 1) throw FormatError("dim must be a positive integer");
    const auto dim = dim_j.get<std::size_t>();
    const auto& entries = field(j, "entries_row_major");
    if (!entries.is_array() || entries.size() != dim * dim)
        throw FormatError("entries_row_major must hold dim*dim entries");
    HamiltonianMatrix m;
    m.entries = ComplexMatrix(dim, dim);
    for (std::size_t i = 0; i < dim * dim; ++i) m.entries(i / dim, i % dim) = complex_pair(entries[i], "matrix entry");
    const auto units = field(j, "units").get<std::string>();
    if (units == "fm^-1")
        m.units = MatrixUnits::InverseFm;
    else if (units == "fm")
        m.units = MatrixUnits::Fm;
    else
        throw FormatError("units must be \"fm^-1\" or \"fm\"");
    const auto source = j.value("source", std::string("computed"));
    if (source == "computed")
        m.source = MatrixSource::Computed;
    else if (source == "literal")
        m.source = MatrixSource::Literal;
    else
        throw FormatError("source must be \"computed\" or \"literal\"");
    m.channel = j.value("channel", std::string());
    return m;
}

json to_json(const PauliSum& s) {
    json terms = json::array();
    for (const auto& t : s.terms())
        terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"string", t.string.str()}});
    return {{"n", s.n_qubits()}, {"terms", std::move(terms)}};
}

PauliSum pauli_from_json(const json& j) {
    const auto& n_j = field(j, "n");
    if (!n_j.is_number_integer() || n_j.get<std::int64_t>() < 1) throw FormatError("n must be a positive integer");
    const auto n = n_j.get<std::size_t>();
    const auto& terms = field(j, "terms");
    if (!terms.is_array()) throw FormatError("terms must be an array");
    PauliSum s(n);
    for (const auto& t : terms) {
        const auto& str = field(t, "string");
        if (!str.is_string()) throw FormatError("term string must be a string");
        const PauliString p = [&] {
            try {
                return PauliString::parse(str.get<std::string>());
            } catch (const std::exception& e) {
                throw FormatError(e.what());
            }
        }();
        if (p.size() != n) throw FormatError("term string length differs from n");
        s.add(complex_pair(field(t, "coeff"), "coeff"), p);
    }
    return s;
}

json to_json(const NoiseModel& n) {
    json ro = json::array();
    for (const auto& r : n.readout) ro.push_back({{"p10", r.p10}, {"p01", r.p01}});
    return {{"readout", std::move(ro)}, {"depol_1q", n.depol_1q}, {"depol_2q", n.depol_2q}};
}

NoiseModel noise_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("noise model must be a JSON object");
    NoiseModel n;
    if (const auto it = j.find("readout"); it != j.end()) {
        if (!it->is_array()) throw FormatError("readout must be an array");
        for (const auto& r : *it) n.readout.push_back({number(field(r, "p10"), "p10"), number(field(r, "p01"), "p01")});
    }
    if (const auto it = j.find("depol_1q"); it != j.end()) n.depol_1q = number(*it, "depol_1q");
    if (const auto it = j.find("depol_2q"); it != j.end()) n.depol_2q = number(*it, "depol_2q");
    try {
        n.validate();
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
    return n;
}

json to_json(const CalibrationMatrix& c) {
    json rows = json::array();
    for (std::size_t i = 0; i < c.m.rows(); ++i)
        for (std::size_t k = 0; k < c.m.cols(); ++k) rows.push_back(c.m(i, k));
    return {{"dim", c.m.rows()}, {"measured", c.measured}, {"entries_row_major", std::move(rows)}, {"shots", c.shots}};
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos ? pos - 1 : 0), '\n'));
        throw FormatError("malformed JSON", line);
    }
}

json read_json(const std::filesystem::path& p) {
    const auto text = read_file(p);
    try {
        return parse_json(text);
    } catch (const FormatError& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FormatError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + p.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qcharm::io
