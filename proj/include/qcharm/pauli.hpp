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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcharm/linalg.hpp"

namespace qcharm {

enum class Pauli : std::uint8_t { I, X, Y, Z };

char to_char(Pauli p);

/// Tensor product ops[0] (x) ops[1] (x) ... Qubit 0 is the most significant
/// bit of the computational-basis index.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> ops);
    explicit PauliString(std::size_t n_qubits) : ops_(n_qubits, Pauli::I) {}

    /// "IXYZ"-style text, qubit 0 first. Throws std::invalid_argument on other characters.
    static PauliString parse(std::string_view text);
    /// `p` on `qubit`, identity elsewhere.
    static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p);

    std::size_t size() const { return ops_.size(); }
    Pauli operator[](std::size_t q) const { return ops_[q]; }
    const std::vector<Pauli>& ops() const { return ops_; }
    bool is_identity() const;
    std::string str() const;

    /// Index bits flipped by the string (X or Y positions).
    std::uint64_t flip_mask() const;
    /// Bits whose value contributes a sign (Y or Z positions).
    std::uint64_t sign_mask() const;
    int y_count() const;
    /// P|b> = phase(b) |b ^ flip_mask()>.
    cplx phase(std::uint64_t basis_index) const;

    ComplexMatrix matrix() const;

    friend auto operator<=>(const PauliString&, const PauliString&) = default;
    friend bool operator==(const PauliString&, const PauliString&) = default;

  private:
    std::vector<Pauli> ops_;
};

struct PauliTerm {
    cplx coeff;
    PauliString string;
};

/// Weighted sum of Pauli strings on a fixed register. Strings are unique;
/// coefficients with magnitude below kPruneThreshold are dropped.
class PauliSum {
  public:
    static constexpr double kPruneThreshold = 1e-12;

    PauliSum() = default;
    explicit PauliSum(std::size_t n_qubits) : n_(n_qubits) {}

    std::size_t n_qubits() const { return n_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Adds to an existing string's coefficient or appends a new term.
    void add(cplx coeff, const PauliString& s);
    void prune(double threshold = kPruneThreshold);
    /// Coefficient of `s`, zero if absent.
    cplx coefficient(const PauliString& s) const;
    cplx coefficient(std::string_view s) const { return coefficient(PauliString::parse(s)); }

    /// All coefficients real within `tol`, which for Pauli strings is
    /// equivalent to the reconstructed matrix being Hermitian.
    bool is_hermitian(double tol = 1e-10) const;

    PauliSum& operator*=(cplx s);
    friend PauliSum operator+(const PauliSum& a, const PauliSum& b);

  private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

/// c_P = Tr(P M) / 2^n over all 4^n strings, ordered I < X < Y < Z with
/// qubit 0 most significant. Throws std::invalid_argument unless M is square
/// with power-of-two dimension.
PauliSum decompose(const ComplexMatrix& m);
PauliSum decompose(const RealMatrix& m);

ComplexMatrix reconstruct(const PauliSum& s);

/// <psi|P|psi> without forming the matrix.
cplx expval(const PauliString& p, std::span<const cplx> amplitudes);
/// <bra|P|ket>.
cplx matrix_element(const PauliString& p, std::span<const cplx> bra, std::span<const cplx> ket);
/// Term-by-term <psi|S|psi>. Throws std::invalid_argument on size mismatch.
cplx expval_exact(const PauliSum& s, std::span<const cplx> amplitudes);

/// Number of qubits for a 2^n dimension; throws std::invalid_argument otherwise.
std::size_t qubits_for_dim(std::size_t dim);

}  // namespace qcharm
