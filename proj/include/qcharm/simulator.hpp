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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcharm/linalg.hpp"
#include "qcharm/pauli.hpp"
#include "qcharm/rng.hpp"

namespace qcharm {

// ---- Gates and circuits ------------------------------------------------------

enum class GateKind { RX, RY, H, X, Y, Z, Swap, PauliProduct };

/// Rotation angle: offset + scale * theta[slot], or just offset when slot < 0.
struct Angle {
    double offset = 0.0;
    int slot = -1;
    double scale = 1.0;

    static Angle fixed(double value) { return {value, -1, 1.0}; }
    static Angle param(int slot, double scale = 1.0) { return {0.0, slot, scale}; }
    double resolve(std::span<const double> theta) const;
};

struct Gate {
    GateKind kind = GateKind::X;
    std::vector<int> targets;   // one per Pauli for PauliProduct, two for Swap, else one
    std::vector<int> controls;  // all must read 1
    Angle angle;                // RX / RY only
    std::vector<Pauli> paulis;  // PauliProduct only

    static Gate rx(int q, Angle a);
    static Gate ry(int q, Angle a);
    static Gate h(int q);
    static Gate x(int q);
    static Gate y(int q);
    static Gate z(int q);
    static Gate cnot(int control, int target);
    static Gate toffoli(int c0, int c1, int target);
    static Gate swap(int a, int b);
    static Gate cswap(int control, int a, int b);
    /// `p` acting on `qubits[k]` for each k; identity factors are dropped.
    static Gate pauli_product(const PauliString& p, std::span<const int> qubits);

    Gate controlled_by(int control) const;
    Gate inverse() const;
    bool parametrized() const { return (kind == GateKind::RX || kind == GateKind::RY) && angle.slot >= 0; }
    /// All qubits the gate touches, controls first.
    std::vector<int> qubits() const;
    std::string name() const;

    /// Dense unitary on qubits() ordered as returned (first = most significant).
    ComplexMatrix dense(std::span<const double> theta = {}) const;
};

class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(int n_qubits);

    int n_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    /// One past the highest slot referenced.
    int n_slots() const;

    /// Throws std::invalid_argument on out-of-range or repeated qubits.
    Circuit& add(Gate g);
    Circuit& append(const Circuit& other);

    /// Gates reversed and individually inverted.
    Circuit inverse() const;
    /// Every gate gains `control` as an extra control qubit.
    Circuit controlled_by(int control) const;
    /// Every parametrized slot is read by exactly one RX/RY gate with scale +-1,
    /// the condition for the two-term shift rule. Throws std::invalid_argument otherwise.
    void check_shift_rule() const;

  private:
    int n_ = 0;
    std::vector<Gate> gates_;
};

// ---- State vector ------------------------------------------------------------

class StateVector {
  public:
    explicit StateVector(int n_qubits);
    static StateVector from_amplitudes(std::vector<cplx> amps);

    int n_qubits() const { return n_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }

    void apply(const Gate& g, std::span<const double> theta = {});
    double norm() const;
    std::vector<double> probabilities() const;
    /// Marginal distribution over `measured`, outcome bit k = measured[k]
    /// with measured[0] most significant.
    std::vector<double> probabilities(std::span<const int> measured) const;

  private:
    void apply_1q(const ComplexMatrix& u, int target, std::uint64_t control_mask);

    int n_;
    std::vector<cplx> amps_;
};

/// Applies the gates to |0...0>. Throws std::invalid_argument if theta is
/// shorter than circuit.n_slots().
StateVector run(const Circuit& c, std::span<const double> theta = {});

cplx expval_exact(const PauliSum& s, const StateVector& psi);

// ---- Ansatz and overlap -----------------------------------------------------

/// Schmidt-form two-qubit ansatz: RY(a0) q0; CNOT q0->q1; RY(a1) q0; RY(a2) q1.
/// Spans every real 4-vector.
Circuit ansatz(int n_qubits, int q0, int q1, const std::array<Angle, 3>& angles);
/// Two-qubit ansatz on slots 0, 1, 2.
Circuit ansatz();
/// Ansatz with fixed angles.
Circuit ansatz(std::span<const double> theta, int n_qubits = 2, int q0 = 0, int q1 = 1);

/// ansatz(theta_i) followed by ansatz(theta_f)^dagger; P(00) = |<f|i>|^2.
/// This form reads theta_i from slots 0..2 and bakes theta_f in.
Circuit overlap_circuit(std::span<const double> theta_f);
/// Fully bound form.
Circuit overlap_circuit(std::span<const double> theta_i, std::span<const double> theta_f);

/// Amplitudes of the two-qubit ansatz state, closed form.
std::array<double, 4> ansatz_amplitudes(std::span<const double> theta);

// ---- Noise -------------------------------------------------------------------

struct ReadoutError {
    double p10 = 0.0;  // P(read 1 | true 0)
    double p01 = 0.0;  // P(read 0 | true 1)
};

struct NoiseModel {
    /// Empty: no readout error. One entry: applies to every qubit. Otherwise per qubit.
    std::vector<ReadoutError> readout;
    double depol_1q = 0.0;
    double depol_2q = 0.0;

    static NoiseModel default_readout();
    static NoiseModel default_depolarizing();
    static NoiseModel default_full();

    /// Throws std::invalid_argument unless every probability is in [0, 1).
    void validate() const;
    ReadoutError readout_for(int qubit) const;
    bool has_readout() const;
    bool has_gate_noise() const { return depol_1q > 0.0 || depol_2q > 0.0; }
    /// Fault probability after `g`: depol_1q for one-qubit gates, depol_2q for
    /// anything larger (Toffoli and controlled swaps included).
    double gate_error(const Gate& g) const;
};

/// One trajectory: after each gate, with the gate's error probability, insert
/// a uniformly random non-identity Pauli on all of the gate's qubits.
Circuit apply_depolarizing(const Circuit& c, const NoiseModel& model, RngStream& rng);

// ---- Sampling ----------------------------------------------------------------

/// Outcome counts over the measured qubits, indexed like StateVector::probabilities(measured).
using Histogram = std::vector<std::uint64_t>;

/// Multinomial draw of `shots` outcomes from `probs`.
Histogram sample_multinomial(std::span<const double> probs, std::uint64_t shots, RngStream& rng);

/// Pushes true-outcome counts through independent per-qubit bit flips.
Histogram apply_readout(const Histogram& truth, std::span<const int> measured, const NoiseModel& noise,
                        RngStream& rng);

/// Samples from a fixed state (no gate noise), then readout noise if given.
Histogram measure_counts(const StateVector& psi, std::span<const int> measured, std::uint64_t shots, RngStream& rng,
                         const NoiseModel* noise = nullptr);

struct SampleStats {
    std::uint64_t faulty_shots = 0;
    std::uint64_t faults = 0;  // total inserted Paulis
};

/// Runs `shots` independent noisy trajectories of `c`. Shots without any fault
/// share one noiseless state; the rest draw their first fault from its
/// conditional distribution and later faults independently.
Histogram sample_circuit(const Circuit& c, std::span<const double> theta, std::span<const int> measured,
                         std::uint64_t shots, RngStream& rng, const NoiseModel* noise = nullptr,
                         SampleStats* stats = nullptr);

// ---- Execution configuration ------------------------------------------------

enum class Mode { Exact, Sampled };

struct RunConfig {
    Mode mode = Mode::Exact;
    std::uint64_t shots = 20000;
    std::uint64_t seed = 0;
    int trials = 1;
    std::optional<NoiseModel> noise;  // sampled mode only
};

/// Readout-correction hook; the mitigation module provides the calibrated one.
class ReadoutCorrector {
  public:
    virtual ~ReadoutCorrector() = default;
    /// Corrected distribution over the measured qubits.
    virtual std::vector<double> correct(const Histogram& counts, std::span<const int> measured) const = 0;
};

struct Exec {
    RunConfig config;
    const ReadoutCorrector* corrector = nullptr;

    bool exact() const { return config.mode == Mode::Exact; }
    const NoiseModel* noise() const { return exact() || !config.noise ? nullptr : &*config.noise; }
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;  // standard error; 0 in exact mode
};

/// Distribution over the measured qubits: exact probabilities, or sampled
/// frequencies (corrected when exec has a corrector). `shots` is 0 in exact mode.
struct Distribution {
    std::vector<double> probs;
    std::uint64_t shots = 0;
};

Distribution measure(const Circuit& c, std::span<const double> theta, std::span<const int> measured,
                     const Exec& exec, StreamKey key);

/// P(outcome) with binomial standard error.
Estimate probability(const Distribution& d, std::uint64_t outcome);
/// <Z...Z> over all measured qubits with standard error sqrt((1 - m^2) / shots).
Estimate parity(const Distribution& d);

/// Sum_k c_k <P_k>. Non-identity strings are rotated to the Z basis
/// (RY(-pi/2) for X, RX(pi/2) for Y) and measured with the full shot budget
/// on stream key.child(k). Throws std::invalid_argument for non-Hermitian sums.
Estimate expval_sampled(const PauliSum& s, const Circuit& state_prep, std::span<const double> theta,
                        const Exec& exec, StreamKey key);

/// Basis-change gates that map `p` onto Z measurements of its support.
Circuit measurement_basis(const PauliString& p, int n_qubits);

}  // namespace qcharm
