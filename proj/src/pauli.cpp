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

#include "qcharm/pauli.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qcharm {

char to_char(Pauli p) {
    static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
    return kChars[static_cast<int>(p)];
}

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {
    if (ops_.size() > 62) throw std::invalid_argument("PauliString: too many qubits");
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> ops;
    ops.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'I': ops.push_back(Pauli::I); break;
            case 'X': ops.push_back(Pauli::X); break;
            case 'Y': ops.push_back(Pauli::Y); break;
            case 'Z': ops.push_back(Pauli::Z); break;
            default: throw std::invalid_argument("PauliString: bad character in '" + std::string(text) + "'");
        }
    }
    return PauliString(std::move(ops));
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
    if (qubit >= n_qubits) throw std::invalid_argument("PauliString::single: qubit out of range");
    PauliString s(n_qubits);
    s.ops_[qubit] = p;
    return s;
}

bool PauliString::is_identity() const {
    return std::all_of(ops_.begin(), ops_.end(), [](Pauli p) { return p == Pauli::I; });
}

std::string PauliString::str() const {
    std::string s;
    for (Pauli p : ops_) s.push_back(to_char(p));
    return s;
}

std::uint64_t PauliString::flip_mask() const {
    std::uint64_t m = 0;
    const std::size_t n = ops_.size();
    for (std::size_t q = 0; q < n; ++q)
        if (ops_[q] == Pauli::X || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << (n - 1 - q);
    return m;
}

std::uint64_t PauliString::sign_mask() const {
    std::uint64_t m = 0;
    const std::size_t n = ops_.size();
    for (std::size_t q = 0; q < n; ++q)
        if (ops_[q] == Pauli::Y || ops_[q] == Pauli::Z) m |= std::uint64_t{1} << (n - 1 - q);
    return m;
}

int PauliString::y_count() const {
    return static_cast<int>(std::count(ops_.begin(), ops_.end(), Pauli::Y));
}

cplx PauliString::phase(std::uint64_t b) const {
    // Y = i X Z, so P|b> = i^{#Y} (-1)^{popcount(b & sign_mask)} |b ^ flip>.
    static const cplx kIPow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx base = kIPow[y_count() % 4];
    return (std::popcount(b & sign_mask()) & 1) ? -base : base;
}

ComplexMatrix PauliString::matrix() const {
    const std::size_t dim = std::size_t{1} << ops_.size();
    ComplexMatrix m(dim, dim);
    const auto flip = flip_mask();
    for (std::size_t b = 0; b < dim; ++b) m(b ^ flip, b) = phase(b);
    return m;
}

void PauliSum::add(cplx coeff, const PauliString& s) {
    if (n_ == 0 && terms_.empty()) n_ = s.size();
    if (s.size() != n_) throw std::invalid_argument("PauliSum::add: register size mismatch");
    for (auto& t : terms_)
        if (t.string == s) {
            t.coeff += coeff;
            return;
        }
    terms_.push_back({coeff, s});
}

void PauliSum::prune(double threshold) {
    std::erase_if(terms_, [&](const PauliTerm& t) { return std::abs(t.coeff) < threshold; });
}

cplx PauliSum::coefficient(const PauliString& s) const {
    for (const auto& t : terms_)
        if (t.string == s) return t.coeff;
    return {0.0, 0.0};
}

bool PauliSum::is_hermitian(double tol) const {
    return std::all_of(terms_.begin(), terms_.end(), [&](const PauliTerm& t) { return std::abs(t.coeff.imag()) <= tol; });
}

PauliSum& PauliSum::operator*=(cplx s) {
    for (auto& t : terms_) t.coeff *= s;
    return *this;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
    PauliSum out = a;
    for (const auto& t : b.terms()) out.add(t.coeff, t.string);
    return out;
}

std::size_t qubits_for_dim(std::size_t dim) {
    if (dim == 0 || !std::has_single_bit(dim)) throw std::invalid_argument("dimension is not a power of two");
    return static_cast<std::size_t>(std::countr_zero(dim));
}

PauliSum decompose(const ComplexMatrix& m) {
    if (!m.square()) throw std::invalid_argument("decompose: matrix is not square");
    const std::size_t n = qubits_for_dim(m.rows());
    const std::size_t dim = m.rows();
    PauliSum out(n);
    const std::size_t n_strings = std::size_t{1} << (2 * n);
    for (std::size_t code = 0; code < n_strings; ++code) {
        std::vector<Pauli> ops(n);
        for (std::size_t q = 0; q < n; ++q) ops[q] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3);
        const PauliString s(std::move(ops));
        // Tr(P M) = sum_c phase(c) M(c, c ^ flip).
        const auto flip = s.flip_mask();
        cplx tr = 0.0;
        for (std::size_t c = 0; c < dim; ++c) tr += s.phase(c) * m(c, c ^ flip);
        const cplx coeff = tr / static_cast<double>(dim);
        if (std::abs(coeff) >= PauliSum::kPruneThreshold) out.add(coeff, s);
    }
    return out;
}

PauliSum decompose(const RealMatrix& m) { return decompose(to_complex(m)); }

ComplexMatrix reconstruct(const PauliSum& s) {
    const std::size_t dim = std::size_t{1} << s.n_qubits();
    ComplexMatrix m(dim, dim);
    for (const auto& t : s.terms()) {
        const auto flip = t.string.flip_mask();
        for (std::size_t b = 0; b < dim; ++b) m(b ^ flip, b) += t.coeff * t.string.phase(b);
    }
    return m;
}

cplx matrix_element(const PauliString& p, std::span<const cplx> bra, std::span<const cplx> ket) {
    const std::size_t dim = std::size_t{1} << p.size();
    if (bra.size() != dim || ket.size() != dim) throw std::invalid_argument("matrix_element: size mismatch");
    const auto flip = p.flip_mask();
    cplx acc = 0.0;
    for (std::size_t b = 0; b < dim; ++b) acc += std::conj(bra[b ^ flip]) * p.phase(b) * ket[b];
    return acc;
}

cplx expval(const PauliString& p, std::span<const cplx> amplitudes) { return matrix_element(p, amplitudes, amplitudes); }

cplx expval_exact(const PauliSum& s, std::span<const cplx> amplitudes) {
    if (amplitudes.size() != (std::size_t{1} << s.n_qubits()))
        throw std::invalid_argument("expval_exact: register size mismatch");
    cplx acc = 0.0;
    for (const auto& t : s.terms()) acc += t.coeff * expval(t.string, amplitudes);
    return acc;
}

}  // namespace qcharm
