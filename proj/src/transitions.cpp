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

#include "qcharm/transitions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcharm {

Theta theta_from_amplitudes(std::span<const double> v) {
    if (v.size() != 4) throw std::invalid_argument("theta_from_amplitudes: expects 4 amplitudes");
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (std::abs(norm - 1.0) > 1e-8) throw std::invalid_argument("theta_from_amplitudes: vector is not normalized");
    // M = R(phi) diag(sx, sy) R(t) with R(a) = [[cos a, -sin a], [sin a, cos a]];
    // the ansatz coefficient matrix is R(t1/2) diag(cos t0/2, sin t0/2) R(-t2/2).
    const double e = (v[0] + v[3]) / 2, f = (v[0] - v[3]) / 2;
    const double g = (v[2] + v[1]) / 2, h = (v[2] - v[1]) / 2;
    const double q = std::hypot(e, h), r = std::hypot(f, g);
    const double sx = q + r, sy = q - r;
    const double a1 = std::atan2(g, f), a2 = std::atan2(h, e);
    const double phi = (a2 + a1) / 2, t = (a2 - a1) / 2;
    return {2.0 * std::atan2(sy, sx), 2.0 * phi, -2.0 * t};
}

std::string_view to_string(TransitionKind k) { return k == TransitionKind::M1 ? "m1" : "e1"; }

std::string_view to_string(AmpMethod m) {
    switch (m) {
        case AmpMethod::Direct: return "direct";
        case AmpMethod::Swap: return "swap";
        case AmpMethod::Hadamard: return "hadamard";
    }
    return "?";
}

std::string StateRef::label() const {
    const Channel ch = qcharm::channel(this->channel);
    return std::to_string(index + 1) + "^" + std::string(1, ch.label[0]) + std::string(ch.label.substr(1));
}

std::string TransitionSpec::name() const { return initial.label() + "->" + final_state.label(); }

const StateRef& TransitionSpec::p_wave() const {
    return qcharm::channel(initial.channel).l == 1 ? initial : final_state;
}

const StateRef& TransitionSpec::s_wave() const {
    return qcharm::channel(initial.channel).l == 1 ? final_state : initial;
}

std::vector<TransitionSpec> default_m1_transitions() {
    using enum ChannelId;
    auto t = [](ChannelId ci, int i, ChannelId cf, int f) {
        return TransitionSpec{{ci, i, {}}, {cf, f, {}}, TransitionKind::M1};
    };
    return {t(Triplet3S1, 0, Singlet1S0, 0), t(Triplet3S1, 1, Singlet1S0, 0), t(Triplet3S1, 1, Singlet1S0, 1),
            t(Triplet3S1, 2, Singlet1S0, 1), t(Singlet1S0, 1, Triplet3S1, 0), t(Singlet1S0, 2, Triplet3S1, 0)};
}

std::vector<TransitionSpec> default_e1_transitions() {
    using enum ChannelId;
    auto t = [](ChannelId ci, int i, ChannelId cf, int f) {
        return TransitionSpec{{ci, i, {}}, {cf, f, {}}, TransitionKind::E1};
    };
    return {t(Singlet1P1, 0, Singlet1S0, 0), t(Singlet1P1, 1, Singlet1S0, 1), t(Singlet1S0, 1, Singlet1P1, 0),
            t(Singlet1S0, 2, Singlet1P1, 1), t(Singlet1S0, 2, Singlet1P1, 0)};
}

Estimate m1_direct(const Theta& theta_i, const Theta& theta_f, const Exec& exec, StreamKey key) {
    static const std::vector<int> pair{0, 1};
    return probability(measure(overlap_circuit(theta_i, theta_f), {}, pair, exec, key), 0);
}

Circuit swap_test_circuit(const Theta& theta_i, const Theta& theta_f) {
    Circuit c(5);
    c.add(Gate::h(0));
    c.append(ansatz(theta_i, 5, 1, 2));
    c.append(ansatz(theta_f, 5, 3, 4));
    c.add(Gate::cswap(0, 1, 3)).add(Gate::cswap(0, 2, 4));
    c.add(Gate::h(0));
    return c;
}

Estimate m1_swap(const Theta& theta_i, const Theta& theta_f, const Exec& exec, StreamKey key) {
    static const std::vector<int> ancilla{0};
    const auto p0 = probability(measure(swap_test_circuit(theta_i, theta_f), {}, ancilla, exec, key), 0);
    return {2.0 * p0.value - 1.0, 2.0 * p0.error};
}

Circuit hadamard_circuit(const Theta& theta_i, const Theta& theta_f, const PauliString& p, HadamardPart part) {
    if (p.size() != 2) throw std::invalid_argument("hadamard_circuit: operator must act on two qubits");
    static const int pair[] = {1, 2};
    Circuit c(3);
    c.add(Gate::h(0));
    c.append(ansatz(theta_f, 3, 1, 2).controlled_by(0));
    c.add(Gate::x(0));
    c.append(ansatz(theta_i, 3, 1, 2).controlled_by(0));
    if (!p.is_identity()) c.add(Gate::pauli_product(p, pair).controlled_by(0));
    if (part == HadamardPart::Real)
        c.add(Gate::ry(0, Angle::fixed(-std::numbers::pi / 2)));
    else
        c.add(Gate::rx(0, Angle::fixed(std::numbers::pi / 2)));
    return c;
}

ComplexEstimate hadamard_term(const Theta& theta_i, const Theta& theta_f, const PauliString& p, const Exec& exec,
                              StreamKey key) {
    static const std::vector<int> ancilla{0};
    const auto re = parity(measure(hadamard_circuit(theta_i, theta_f, p, HadamardPart::Real), {}, ancilla, exec, key.child(0)));
    const auto im = parity(measure(hadamard_circuit(theta_i, theta_f, p, HadamardPart::Imag), {}, ancilla, exec, key.child(1)));
    return {{re.value, im.value}, re.error, im.error};
}

Estimate e1_amplitude(const Theta& theta_ket, const Theta& theta_bra, const PauliSum& op, const Exec& exec,
                      StreamKey key) {
    cplx z = 0.0;
    double var_re = 0.0, var_im = 0.0;
    const auto& terms = op.terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto h = hadamard_term(theta_ket, theta_bra, terms[k].string, exec, key.child(k));
        const cplx c = terms[k].coeff;
        z += c * h.value;
        // Re(c h) = Re c Re h - Im c Im h; Im(c h) = Re c Im h + Im c Re h.
        var_re += std::norm(c.real() * h.error_re) + std::norm(c.imag() * h.error_im);
        var_im += std::norm(c.real() * h.error_im) + std::norm(c.imag() * h.error_re);
    }
    const double mag = std::abs(z);
    const double err = mag > 0.0 ? std::sqrt(z.real() * z.real() * var_re + z.imag() * z.imag() * var_im) / mag
                                 : std::sqrt(var_re + var_im);
    return {mag, err};
}

AmplitudeResult evaluate_transition(const TransitionSpec& spec, AmpMethod method, const PauliSum& e1_op,
                                    const Exec& exec, StreamKey key) {
    const bool m1 = spec.kind == TransitionKind::M1;
    if (m1 && method == AmpMethod::Hadamard) throw std::invalid_argument("the Hadamard test applies to E1 transitions");
    if (!m1 && method != AmpMethod::Hadamard) throw std::invalid_argument("E1 transitions need the Hadamard test");
    if (!m1 && qcharm::channel(spec.initial.channel).l == qcharm::channel(spec.final_state.channel).l)
        throw std::invalid_argument("E1 transitions connect a P wave and an S wave");
    if (m1 && (qcharm::channel(spec.initial.channel).l != 0 || qcharm::channel(spec.final_state.channel).l != 0))
        throw std::invalid_argument("M1 transitions connect S-wave channels");

    AmplitudeResult out;
    out.transition = spec.name();
    out.kind = spec.kind;
    out.method = method;
    out.trials = exec.exact() ? 1 : std::max(1, exec.config.trials);
    double single_error = 0.0;
    for (int t = 0; t < out.trials; ++t) {
        const StreamKey tk = key.child(t);
        Estimate e;
        switch (method) {
            case AmpMethod::Direct: e = m1_direct(spec.initial.theta, spec.final_state.theta, exec, tk); break;
            case AmpMethod::Swap: e = m1_swap(spec.initial.theta, spec.final_state.theta, exec, tk); break;
            case AmpMethod::Hadamard: e = e1_amplitude(spec.s_wave().theta, spec.p_wave().theta, e1_op, exec, tk); break;
        }
        out.per_trial.push_back(e.value);
        single_error = e.error;
    }
    double mean = 0.0;
    for (double v : out.per_trial) mean += v;
    mean /= out.trials;
    out.value = mean;
    if (out.trials > 1) {
        double ss = 0.0;
        for (double v : out.per_trial) ss += (v - mean) * (v - mean);
        out.error = std::sqrt(ss / (out.trials - 1) / out.trials);
    } else {
        out.error = single_error;
    }
    return out;
}

double grid_transition(TransitionKind kind, const RadialSolution& initial, const RadialSolution& final_state) {
    if (kind == TransitionKind::M1) {
        const double o = grid_overlap(final_state, initial, OverlapWeight::One);
        return o * o;
    }
    return std::abs(grid_overlap(final_state, initial, OverlapWeight::R));
}

}  // namespace qcharm
