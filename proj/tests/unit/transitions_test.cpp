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

#include "generators.hpp"
#include "qcharm/transitions.hpp"

using namespace qcharm;

namespace {

std::vector<cplx> amps(const Theta& t) {
    const auto a = ansatz_amplitudes(t);
    return {a.begin(), a.end()};
}

std::vector<double> column(const RealMatrix& m, std::size_t k) {
    std::vector<double> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, k);
    return v;
}

}  // namespace

TEST(ThetaFromAmplitudes, RoundTripProperty) {
    gen::Gen g(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto v = g.unit_vector(4);
        const auto a = ansatz_amplitudes(theta_from_amplitudes(v));
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], v[i], 1e-10);
    }
    // Degenerate Schmidt coefficients.
    const std::vector<double> bell{std::sqrt(0.5), 0, 0, std::sqrt(0.5)}, basis{0, 0, 1, 0};
    for (const auto& v : {bell, basis}) {
        const auto a = ansatz_amplitudes(theta_from_amplitudes(v));
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], v[i], 1e-12);
    }
}

TEST(ThetaFromAmplitudes, RejectsBadInput) {
    EXPECT_THROW(theta_from_amplitudes(std::vector<double>{1, 1, 0, 0}), std::invalid_argument);
    EXPECT_THROW(theta_from_amplitudes(std::vector<double>{1, 0, 0}), std::invalid_argument);
}

TEST(M1, DirectAndSwapAgreeInExactMode) {
    gen::Gen g(32);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = g.angles(3), b = g.angles(3);
        const auto va = ansatz_amplitudes(a), vb = ansatz_amplitudes(b);
        double o = 0;
        for (int i = 0; i < 4; ++i) o += va[i] * vb[i];
        const auto d = m1_direct(a, b, Exec{}, StreamKey(0));
        const auto s = m1_swap(a, b, Exec{}, StreamKey(0));
        EXPECT_NEAR(d.value, o * o, 1e-12);
        EXPECT_NEAR(s.value, d.value, 1e-10);
    }
}

TEST(Hadamard, TermMatchesDenseMatrixElement) {
    gen::Gen g(33);
    const auto ti = g.angles(3), tf = g.angles(3);
    const auto ki = amps(ti), bf = amps(tf);
    for (int code = 0; code < 16; ++code) {
        const PauliString p(std::vector<Pauli>{static_cast<Pauli>(code >> 2), static_cast<Pauli>(code & 3)});
        const auto m = p.matrix();
        cplx want = 0;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) want += std::conj(bf[r]) * m(r, c) * ki[c];
        const auto got = hadamard_term(ti, tf, p, Exec{}, StreamKey(0)).value;
        EXPECT_LT(std::abs(got - want), 1e-12) << p.str();
    }
}

TEST(E1, AmplitudeMatchesBraMatrixKet) {
    const auto m = literal_e1().real();
    const auto op = decompose(m);
    const auto s = diagonalize(literal_hamiltonian(ChannelId::Singlet1S0));
    const auto p = diagonalize(literal_hamiltonian(ChannelId::Singlet1P1));
    for (std::size_t si = 0; si < 3; ++si)
        for (std::size_t pi = 0; pi < 2; ++pi) {
            const auto vs = column(s.vectors, si), vp = column(p.vectors, pi);
            double want = 0;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) want += vp[r] * m(r, c) * vs[c];
            const auto got = e1_amplitude(theta_from_amplitudes(vs), theta_from_amplitudes(vp), op, Exec{}, StreamKey(0));
            EXPECT_NEAR(got.value, std::abs(want), 1e-10);
        }
}

TEST(Transitions, LabelsAndRoles) {
    const auto m1 = default_m1_transitions();
    const auto e1 = default_e1_transitions();
    ASSERT_EQ(m1.size(), 6u);
    ASSERT_EQ(e1.size(), 5u);
    EXPECT_EQ(m1[0].name(), "1^3S1->1^1S0");
    EXPECT_EQ(e1[2].name(), "2^1S0->1^1P1");
    EXPECT_EQ(e1[2].p_wave().channel, ChannelId::Singlet1P1);
    EXPECT_EQ(e1[0].s_wave().channel, ChannelId::Singlet1S0);
}

TEST(Transitions, MethodKindMismatchThrows) {
    const auto op = decompose(literal_e1().real());
    auto m1 = default_m1_transitions()[0];
    auto e1 = default_e1_transitions()[0];
    m1.initial.theta = m1.final_state.theta = e1.initial.theta = e1.final_state.theta = Theta{0.1, 0.2, 0.3};
    EXPECT_THROW(evaluate_transition(m1, AmpMethod::Hadamard, op, Exec{}, StreamKey(0)), std::invalid_argument);
    EXPECT_THROW(evaluate_transition(e1, AmpMethod::Swap, op, Exec{}, StreamKey(0)), std::invalid_argument);
    EXPECT_NO_THROW(evaluate_transition(e1, AmpMethod::Hadamard, op, Exec{}, StreamKey(0)));
}

TEST(Transitions, TrialStatistics) {
    auto spec = default_m1_transitions()[1];
    gen::Gen g(34);
    spec.initial.theta = g.angles(3);
    spec.final_state.theta = g.angles(3);
    Exec exec;
    exec.config.mode = Mode::Sampled;
    exec.config.shots = 5000;
    exec.config.trials = 8;
    const auto r = evaluate_transition(spec, AmpMethod::Direct, {}, exec, StreamKey(3));
    ASSERT_EQ(r.per_trial.size(), 8u);
    double mean = 0;
    for (double v : r.per_trial) mean += v;
    mean /= 8;
    double ss = 0;
    for (double v : r.per_trial) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(r.value, mean, 1e-15);
    EXPECT_NEAR(r.error, std::sqrt(ss / 7 / 8), 1e-15);
    const double exact = evaluate_transition(spec, AmpMethod::Direct, {}, Exec{}, StreamKey(0)).value;
    EXPECT_NEAR(r.value, exact, 5 * r.error + 1e-4);
}

TEST(Transitions, SwapTestIsNoisierForSmallOverlaps) {
    // Near-orthogonal states: the swap test reads p0 ~ 1/2, the direct circuit p(00) ~ 0.
    const Theta a{0.3, 0.2, -0.1};
    const auto va = ansatz_amplitudes(a);
    const std::vector<double> orth{-va[1], va[0], -va[3], va[2]};
    const Theta b = theta_from_amplitudes(orth);
    Exec exec;
    exec.config.mode = Mode::Sampled;
    exec.config.shots = 20000;
    const auto d = m1_direct(a, b, exec, StreamKey(1));
    const auto s = m1_swap(a, b, exec, StreamKey(2));
    EXPECT_GT(s.error, 5 * std::max(d.error, 1.0 / 20000));
}
