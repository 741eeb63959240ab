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

#include <span>
#include <string>
#include <vector>

#include "qcharm/pauli.hpp"
#include "qcharm/quarkmodel.hpp"
#include "qcharm/simulator.hpp"
#include "qcharm/vqite.hpp"

namespace qcharm {

/// Parameters theta with ansatz(theta) = v for a real unit 4-vector v, from
/// the closed-form 2x2 singular value decomposition of v as a coefficient matrix.
Theta theta_from_amplitudes(std::span<const double> v);

enum class TransitionKind { M1, E1 };
enum class AmpMethod { Direct, Swap, Hadamard };

std::string_view to_string(TransitionKind k);
std::string_view to_string(AmpMethod m);

struct StateRef {
    ChannelId channel;
    int index = 0;  // 0-based radial excitation
    Theta theta;

    /// "1^3S1"-style label with 1-based index.
    std::string label() const;
};

struct TransitionSpec {
    StateRef initial;
    StateRef final_state;
    TransitionKind kind = TransitionKind::M1;

    std::string name() const;  // "1^3S1->1^1S0"
    /// For E1, the P-wave member; the dipole matrix has P-wave rows.
    const StateRef& p_wave() const;
    const StateRef& s_wave() const;
};

/// Six M1 rows (singlet/triplet S-wave overlaps) and five E1 rows, thetas unset.
std::vector<TransitionSpec> default_m1_transitions();
std::vector<TransitionSpec> default_e1_transitions();

struct ComplexEstimate {
    cplx value;
    double error_re = 0.0;
    double error_im = 0.0;
};

/// P(00) of the inverse-ansatz overlap circuit: |<f|i>|^2.
Estimate m1_direct(const Theta& theta_i, const Theta& theta_f, const Exec& exec, StreamKey key);

/// Ancilla 0, states on (1,2) and (3,4): H, prepare, two controlled swaps, H.
Circuit swap_test_circuit(const Theta& theta_i, const Theta& theta_f);
/// 2 P(ancilla = 0) - 1 = |<f|i>|^2.
Estimate m1_swap(const Theta& theta_i, const Theta& theta_f, const Exec& exec, StreamKey key);

enum class HadamardPart { Real, Imag };
/// Ancilla 0, pair (1,2): H, C-U_f, X, C-U_i, C-P, then RY(-pi/2) or RX(pi/2) on the ancilla.
Circuit hadamard_circuit(const Theta& theta_i, const Theta& theta_f, const PauliString& p, HadamardPart part);
/// <sigma_x> + i <sigma_y> of the ancilla = <f|P|i>.
ComplexEstimate hadamard_term(const Theta& theta_i, const Theta& theta_f, const PauliString& p, const Exec& exec,
                              StreamKey key);

/// |sum_k c_k <bra|P_k|ket>| with one Hadamard test per term (key.child(k)).
Estimate e1_amplitude(const Theta& theta_ket, const Theta& theta_bra, const PauliSum& op, const Exec& exec,
                      StreamKey key);

struct AmplitudeResult {
    std::string transition;
    TransitionKind kind = TransitionKind::M1;
    AmpMethod method = AmpMethod::Direct;
    double value = 0.0;
    double error = 0.0;  // standard error of the trial mean
    int trials = 1;
    std::vector<double> per_trial;
};

/// Mean over exec.config.trials independent estimates (one in exact mode).
/// Throws std::invalid_argument for method/kind mismatches.
AmplitudeResult evaluate_transition(const TransitionSpec& spec, AmpMethod method, const PauliSum& e1_op,
                                    const Exec& exec, StreamKey key);

/// Same quantity from grid wave functions: squared overlap for M1, |<u_P|r|u_S>| for E1.
double grid_transition(TransitionKind kind, const RadialSolution& initial, const RadialSolution& final_state);

}  // namespace qcharm
