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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "qcharm/mitigation.hpp"
#include "qcharm/simulator.hpp"

using namespace qcharm;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);

ComplexMatrix rx(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return ComplexMatrix::from_rows({{c, -kI * s}, {-kI * s, c}});
}
ComplexMatrix ry(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return ComplexMatrix::from_rows({{c, -s}, {s, c}});
}
ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() { return ComplexMatrix::from_rows({{0.0, -kI}, {kI, 0.0}}); }
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }
ComplexMatrix hadamard() {
    const double r = 1 / std::sqrt(2.0);
    return ComplexMatrix::from_rows({{r, r}, {r, -r}});
}

int bit(std::size_t idx, int q, int n) { return static_cast<int>((idx >> (n - 1 - q)) & 1U); }

// Full-register matrix of a (multi-)controlled one-qubit gate, built column by column.
ComplexMatrix embed(const ComplexMatrix& u, int target, std::vector<int> controls, int n) {
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix m(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        bool on = true;
        for (int c : controls) on = on && bit(j, c, n);
        if (!on) {
            m(j, j) = 1.0;
            continue;
        }
        const int b = bit(j, target, n);
        const std::size_t mask = std::size_t{1} << (n - 1 - target);
        for (int b2 = 0; b2 < 2; ++b2) m(b2 ? (j | mask) : (j & ~mask), j) = u(b2, b);
    }
    return m;
}

ComplexMatrix embed_swap(int a, int b, std::vector<int> controls, int n) {
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix m(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        bool on = true;
        for (int c : controls) on = on && bit(j, c, n);
        std::size_t k = j;
        if (on && bit(j, a, n) != bit(j, b, n)) k ^= (std::size_t{1} << (n - 1 - a)) | (std::size_t{1} << (n - 1 - b));
        m(k, j) = 1.0;
    }
    return m;
}

std::vector<cplx> mul(const ComplexMatrix& m, const std::vector<cplx>& v) {
    std::vector<cplx> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

std::vector<cplx> basis0(int n) {
    std::vector<cplx> v(std::size_t{1} << n);
    v[0] = 1.0;
    return v;
}

double max_diff(std::span<const cplx> a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST(Gates, SingleQubitGatesMatchDense) {
    gen::Gen g(1);
    const int n = 3;
    for (int trial = 0; trial < 10; ++trial) {
        const double t = g.uniform(-kPi, kPi);
        const int q = g.integer(0, n - 1);
        const std::vector<std::pair<Gate, ComplexMatrix>> cases{
            {Gate::rx(q, Angle::fixed(t)), rx(t)}, {Gate::ry(q, Angle::fixed(t)), ry(t)}, {Gate::h(q), hadamard()},
            {Gate::x(q), pauli_x()},           {Gate::y(q), pauli_y()},           {Gate::z(q), pauli_z()}};
        // Start from a generic state so every column is exercised.
        std::vector<cplx> v(8);
        for (auto& a : v) a = {g.normal(), g.normal()};
        for (const auto& [gate, u] : cases) {
            auto psi = StateVector::from_amplitudes(v);
            psi.apply(gate);
            EXPECT_LT(max_diff(psi.amplitudes(), mul(embed(u, q, {}, n), v)), 1e-12) << gate.name();
        }
    }
}

TEST(Gates, ControlledGatesMatchDense) {
    gen::Gen g(2);
    const int n = 4;
    std::vector<cplx> v(16);
    for (auto& a : v) a = {g.normal(), g.normal()};
    auto check = [&](const Gate& gate, const ComplexMatrix& full) {
        auto psi = StateVector::from_amplitudes(v);
        psi.apply(gate);
        EXPECT_LT(max_diff(psi.amplitudes(), mul(full, v)), 1e-12) << gate.name();
    };
    check(Gate::cnot(2, 0), embed(pauli_x(), 0, {2}, n));
    check(Gate::toffoli(3, 1, 2), embed(pauli_x(), 2, {3, 1}, n));
    check(Gate::swap(0, 3), embed_swap(0, 3, {}, n));
    check(Gate::cswap(1, 0, 2), embed_swap(0, 2, {1}, n));
    check(Gate::ry(1, Angle::fixed(0.7)).controlled_by(3), embed(ry(0.7), 1, {3}, n));
    const int qs[] = {1, 3};
    check(Gate::pauli_product(PauliString::parse("XY"), qs).controlled_by(0),
          embed(pauli_x(), 1, {0}, n) * embed(pauli_y(), 3, {0}, n));
}

TEST(Gates, DenseAndInverse) {
    const Gate g = Gate::rx(0, Angle::fixed(0.3)).controlled_by(1);
    const auto d = g.dense();
    // qubits() = {1, 0}: control is the most significant local qubit.
    EXPECT_LT(max_abs_diff(d, embed(rx(0.3), 1, {0}, 2)), 1e-14);
    const auto prod = d * g.inverse().dense();
    EXPECT_LT(max_abs_diff(prod, ComplexMatrix::identity(4)), 1e-14);
}

TEST(Circuit, ValidatesQubitsAndSlots) {
    Circuit c(2);
    EXPECT_THROW(c.add(Gate::x(2)), std::invalid_argument);
    EXPECT_THROW(c.add(Gate::cnot(1, 1)), std::invalid_argument);
    EXPECT_THROW(Circuit(0), std::invalid_argument);
    EXPECT_THROW(run(ansatz(), std::vector<double>{0.1}), std::invalid_argument);
    Circuit twice(1);
    twice.add(Gate::ry(0, Angle::param(0))).add(Gate::rx(0, Angle::param(0)));
    EXPECT_THROW(twice.check_shift_rule(), std::invalid_argument);
    EXPECT_NO_THROW(ansatz().check_shift_rule());
}

TEST(Ansatz, ClosedFormAndDenseProduct) {
    gen::Gen g(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto th = g.angles(3);
        const auto psi = run(ansatz(), th);
        const auto closed = ansatz_amplitudes(th);
        const auto dense = mul(embed(ry(th[2]), 1, {}, 2),
                                 mul(embed(ry(th[1]), 0, {}, 2),
                                       mul(embed(pauli_x(), 1, {0}, 2), mul(embed(ry(th[0]), 0, {}, 2), basis0(2)))));
        for (int i = 0; i < 4; ++i) {
            EXPECT_NEAR(psi[i].real(), closed[i], 1e-12);
            EXPECT_NEAR(psi[i].imag(), 0.0, 1e-15);
        }
        EXPECT_LT(max_diff(psi.amplitudes(), dense), 1e-12);
    }
}

TEST(Ansatz, OverlapCircuitGivesSquaredOverlap) {
    gen::Gen g(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = g.angles(3), b = g.angles(3);
        const auto ua = ansatz_amplitudes(a), ub = ansatz_amplitudes(b);
        double o = 0.0;
        for (int i = 0; i < 4; ++i) o += ua[i] * ub[i];
        const auto p = run(overlap_circuit(a, b)).probabilities();
        EXPECT_NEAR(p[0], o * o, 1e-12);
        EXPECT_NEAR(run(overlap_circuit(b), a).probabilities()[0], o * o, 1e-12);
    }
}

TEST(Ansatz, InverseCircuitUndoes) {
    gen::Gen g(5);
    const auto th = g.angles(3);
    Circuit c = ansatz(th);
    c.append(ansatz(th).inverse());
    const auto psi = run(c);
    EXPECT_NEAR(std::abs(psi[0]), 1.0, 1e-12);
}

TEST(StateVector, MarginalsBigEndian) {
    Circuit c(3);
    c.add(Gate::x(0));
    const auto psi = run(c);
    const int q0[] = {0}, q21[] = {2, 0};
    EXPECT_NEAR(psi.probabilities(q0)[1], 1.0, 1e-15);
    EXPECT_NEAR(psi.probabilities(q21)[1], 1.0, 1e-15);  // outcome "01": qubit 2 = 0, qubit 0 = 1
    EXPECT_NEAR(psi.probabilities()[4], 1.0, 1e-15);
}

TEST(Sampling, NoiselessFrequenciesMatchProbabilities) {
    gen::Gen g(6);
    const auto th = g.angles(3);
    const auto p = run(ansatz(), th).probabilities();
    const std::uint64_t shots = 200000;
    RngStream rng(StreamKey(1));
    const int both[] = {0, 1};
    const auto h = sample_circuit(ansatz(), th, both, shots, rng);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        total += h[i];
        const double sd = std::sqrt(p[i] * (1 - p[i]) / shots);
        EXPECT_NEAR(static_cast<double>(h[i]) / shots, p[i], 5 * sd + 1e-12);
    }
    EXPECT_EQ(total, shots);
}

TEST(Sampling, DeterministicPerKey) {
    const auto th = std::vector<double>{0.3, 1.1, -0.4};
    const int both[] = {0, 1};
    RngStream r1(StreamKey(9)), r2(StreamKey(9));
    const NoiseModel noise = NoiseModel::default_full();
    EXPECT_EQ(sample_circuit(ansatz(), th, both, 5000, r1, &noise), sample_circuit(ansatz(), th, both, 5000, r2, &noise));
}

namespace {

// Density-matrix oracle: after each gate, rho -> (1-p) rho + p/(4^k-1) sum_{P != I} P rho P
// over the gate's k qubits; readout flips applied to the diagonal at the end.
std::vector<double> density_oracle(const Circuit& c, const NoiseModel& nm, std::span<const int> measured) {
    const int n = c.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    ComplexMatrix rho(dim, dim);
    rho(0, 0) = 1.0;
    const ComplexMatrix paulis[] = {ComplexMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()};
    for (const auto& g : c.gates()) {
        const auto qs = g.qubits();
        // Unitary of the gate on the full register, via its action on basis vectors.
        ComplexMatrix u(dim, dim);
        for (std::size_t j = 0; j < dim; ++j) {
            std::vector<cplx> e(dim);
            e[j] = 1.0;
            auto psi = StateVector::from_amplitudes(e);
            psi.apply(g);
            for (std::size_t i = 0; i < dim; ++i) u(i, j) = psi[i];
        }
        rho = u * rho * adjoint(u);
        const double p = nm.gate_error(g);
        if (p <= 0.0) continue;
        const std::size_t k = qs.size();
        const std::size_t n_strings = std::size_t{1} << (2 * k);
        ComplexMatrix mixed(dim, dim);
        for (std::size_t code = 1; code < n_strings; ++code) {
            ComplexMatrix op = ComplexMatrix::identity(dim);
            for (std::size_t t = 0; t < k; ++t) op = op * embed(paulis[(code >> (2 * t)) & 3U], qs[t], {}, n);
            mixed += op * rho * adjoint(op);
        }
        rho = rho * cplx(1 - p) + mixed * cplx(p / static_cast<double>(n_strings - 1));
    }
    const std::size_t m = measured.size();
    std::vector<double> out(std::size_t{1} << m);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t o = 0;
        for (std::size_t k = 0; k < m; ++k) o = (o << 1) | static_cast<std::size_t>(bit(i, measured[k], n));
        out[o] += rho(i, i).real();
    }
    for (std::size_t k = 0; k < m; ++k) {
        const auto ro = nm.readout_for(measured[k]);
        std::vector<double> next(out.size());
        const std::size_t mask = std::size_t{1} << (m - 1 - k);
        for (std::size_t o = 0; o < out.size(); ++o) {
            const bool one = o & mask;
            const double flip = one ? ro.p01 : ro.p10;
            next[o] += (1 - flip) * out[o];
            next[o ^ mask] += flip * out[o];
        }
        out = next;
    }
    return out;
}

}  // namespace

TEST(Noise, TrajectorySamplerMatchesDensityMatrix) {
    NoiseModel nm;
    nm.depol_1q = 0.05;
    nm.depol_2q = 0.15;
    nm.readout = {{0.02, 0.03}, {0.04, 0.01}, {0.0, 0.05}};
    Circuit c(3);
    c.add(Gate::h(0)).add(Gate::cnot(0, 1)).add(Gate::ry(2, Angle::fixed(0.8))).add(Gate::cswap(2, 0, 1));
    c.add(Gate::rx(1, Angle::fixed(-0.5)));
    const int measured[] = {0, 1, 2};
    const auto want = density_oracle(c, nm, measured);
    const std::uint64_t shots = 400000;
    RngStream rng(StreamKey(77));
    const auto h = sample_circuit(c, {}, measured, shots, rng, &nm);
    for (std::size_t i = 0; i < want.size(); ++i) {
        const double sd = std::sqrt(want[i] * (1 - want[i]) / shots);
        EXPECT_NEAR(static_cast<double>(h[i]) / shots, want[i], 5 * sd + 1e-9) << i;
    }
}

TEST(Noise, ReadoutOnlyMatchesForwardModel) {
    const NoiseModel nm = NoiseModel::default_readout();
    Circuit c(2);
    c.add(Gate::x(1));
    const int measured[] = {0, 1};
    const auto want = density_oracle(c, nm, measured);
    EXPECT_NEAR(want[1], 0.98 * 0.97, 1e-12);
    RngStream rng(StreamKey(3));
    const std::uint64_t shots = 200000;
    const auto h = sample_circuit(c, {}, measured, shots, rng, &nm);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(static_cast<double>(h[i]) / shots, want[i], 5 * std::sqrt(want[i] * (1 - want[i]) / shots) + 1e-9);
}

TEST(Noise, FaultCountScalesWithFolding) {
    const NoiseModel nm = NoiseModel::default_depolarizing();
    const Circuit base = overlap_circuit(std::vector<double>{0.4, -0.2, 0.9}, std::vector<double>{0.1, 0.5, -0.3});
    const int measured[] = {0, 1};
    const std::uint64_t shots = 400000;
    double per_shot[2];
    double var[2];
    for (int k = 0; k < 2; ++k) {
        const int scale = k == 0 ? 1 : 5;
        SampleStats stats;
        RngStream rng(StreamKey(10 + k));
        sample_circuit(fold(base, scale), {}, measured, shots, rng, &nm, &stats);
        per_shot[k] = static_cast<double>(stats.faults) / shots;
        var[k] = per_shot[k] / shots;  // faults per shot are close to Poisson
    }
    const double sigma = std::sqrt(25 * var[0] + var[1]);
    EXPECT_NEAR(per_shot[1], 5 * per_shot[0], 5 * sigma);
}

TEST(Noise, ValidationAndDefaults) {
    NoiseModel bad;
    bad.depol_1q = 1.2;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    const auto full = NoiseModel::default_full();
    EXPECT_DOUBLE_EQ(full.readout_for(4).p10, 0.02);
    EXPECT_DOUBLE_EQ(full.readout_for(0).p01, 0.03);
    EXPECT_DOUBLE_EQ(full.depol_1q, 0.0005);
    EXPECT_DOUBLE_EQ(full.depol_2q, 0.01);
    EXPECT_DOUBLE_EQ(full.gate_error(Gate::x(0)), 0.0005);
    EXPECT_DOUBLE_EQ(full.gate_error(Gate::cswap(0, 1, 2)), 0.01);
}

TEST(Measure, ExactEstimatesHaveZeroError) {
    Exec exec;
    const int both[] = {0, 1};
    const auto d = measure(ansatz(), std::vector<double>{0.2, 0.4, 0.6}, both, exec, StreamKey(0));
    EXPECT_EQ(d.shots, 0u);
    EXPECT_EQ(probability(d, 0).error, 0.0);
    EXPECT_EQ(parity(d).error, 0.0);
}

TEST(ExpvalSampled, UnbiasedWithinErrors) {
    gen::Gen g(7);
    const auto h = decompose(g.symmetric(4));
    const auto th = g.angles(3);
    const double exact = expval_exact(h, run(ansatz(), th)).real();
    Exec exec;
    exec.config.mode = Mode::Sampled;
    exec.config.shots = 50000;
    const auto e = expval_sampled(h, ansatz(), th, exec, StreamKey(5));
    EXPECT_GT(e.error, 0.0);
    EXPECT_NEAR(e.value, exact, 5 * e.error);
}
