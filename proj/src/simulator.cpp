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

#include "qcharm/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace qcharm {

namespace {

std::uint64_t bit_of(int qubit, int n) { return std::uint64_t{1} << (n - 1 - qubit); }

ComplexMatrix single_qubit_matrix(const Gate& g, std::span<const double> theta) {
    const double s2 = 1.0 / std::numbers::sqrt2;
    switch (g.kind) {
        case GateKind::RX: {
            const double a = g.angle.resolve(theta) / 2.0;
            return ComplexMatrix::from_rows({{std::cos(a), cplx(0, -std::sin(a))}, {cplx(0, -std::sin(a)), std::cos(a)}});
        }
        case GateKind::RY: {
            const double a = g.angle.resolve(theta) / 2.0;
            return ComplexMatrix::from_rows({{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}});
        }
        case GateKind::H: return ComplexMatrix::from_rows({{s2, s2}, {s2, -s2}});
        case GateKind::X: return ComplexMatrix::from_rows({{0, 1}, {1, 0}});
        case GateKind::Y: return ComplexMatrix::from_rows({{0, cplx(0, -1)}, {cplx(0, 1), 0}});
        case GateKind::Z: return ComplexMatrix::from_rows({{1, 0}, {0, -1}});
        default: throw std::logic_error("single_qubit_matrix: not a one-qubit kind");
    }
}

}  // namespace

double Angle::resolve(std::span<const double> theta) const {
    if (slot < 0) return offset;
    if (static_cast<std::size_t>(slot) >= theta.size()) throw std::invalid_argument("unbound parameter slot " + std::to_string(slot));
    return offset + scale * theta[slot];
}

// ---- Gate --------------------------------------------------------------------

Gate Gate::rx(int q, Angle a) { return {GateKind::RX, {q}, {}, a, {}}; }
Gate Gate::ry(int q, Angle a) { return {GateKind::RY, {q}, {}, a, {}}; }
Gate Gate::h(int q) { return {GateKind::H, {q}, {}, {}, {}}; }
Gate Gate::x(int q) { return {GateKind::X, {q}, {}, {}, {}}; }
Gate Gate::y(int q) { return {GateKind::Y, {q}, {}, {}, {}}; }
Gate Gate::z(int q) { return {GateKind::Z, {q}, {}, {}, {}}; }
Gate Gate::cnot(int c, int t) { return x(t).controlled_by(c); }
Gate Gate::toffoli(int c0, int c1, int t) { return x(t).controlled_by(c0).controlled_by(c1); }
Gate Gate::swap(int a, int b) { return {GateKind::Swap, {a, b}, {}, {}, {}}; }
Gate Gate::cswap(int c, int a, int b) { return swap(a, b).controlled_by(c); }

Gate Gate::pauli_product(const PauliString& p, std::span<const int> qubits) {
    if (p.size() != qubits.size()) throw std::invalid_argument("pauli_product: string and qubit list differ in length");
    Gate g{GateKind::PauliProduct, {}, {}, {}, {}};
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == Pauli::I) continue;
        g.targets.push_back(qubits[k]);
        g.paulis.push_back(p[k]);
    }
    return g;
}

Gate Gate::controlled_by(int control) const {
    Gate g = *this;
    g.controls.insert(g.controls.begin(), control);
    return g;
}

Gate Gate::inverse() const {
    Gate g = *this;
    if (kind == GateKind::RX || kind == GateKind::RY) {
        g.angle.offset = -angle.offset;
        g.angle.scale = -angle.scale;
    }
    return g;  // the rest are Hermitian
}

std::vector<int> Gate::qubits() const {
    std::vector<int> q = controls;
    q.insert(q.end(), targets.begin(), targets.end());
    return q;
}

std::string Gate::name() const {
    std::string base;
    switch (kind) {
        case GateKind::RX: base = "RX"; break;
        case GateKind::RY: base = "RY"; break;
        case GateKind::H: base = "H"; break;
        case GateKind::X: base = "X"; break;
        case GateKind::Y: base = "Y"; break;
        case GateKind::Z: base = "Z"; break;
        case GateKind::Swap: base = "SWAP"; break;
        case GateKind::PauliProduct:
            base = "P[";
            for (Pauli p : paulis) base.push_back(to_char(p));
            base += "]";
            break;
    }
    return std::string(controls.size(), 'C') + base;
}

ComplexMatrix Gate::dense(std::span<const double> theta) const {
    const auto qs = qubits();
    const int k = static_cast<int>(qs.size());
    // Relabel onto a k-qubit register in qubits() order.
    Gate local = *this;
    int next = 0;
    for (auto& c : local.controls) c = next++;
    for (auto& t : local.targets) t = next++;
    const std::size_t dim = std::size_t{1} << k;
    ComplexMatrix u(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        std::vector<cplx> e(dim, 0.0);
        e[col] = 1.0;
        auto sv = StateVector::from_amplitudes(std::move(e));
        sv.apply(local, theta);
        for (std::size_t row = 0; row < dim; ++row) u(row, col) = sv[row];
    }
    return u;
}

// ---- Circuit -----------------------------------------------------------------

Circuit::Circuit(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 20) throw std::invalid_argument("Circuit: qubit count out of range");
}

int Circuit::n_slots() const {
    int n = 0;
    for (const auto& g : gates_)
        if (g.parametrized()) n = std::max(n, g.angle.slot + 1);
    return n;
}

Circuit& Circuit::add(Gate g) {
    std::set<int> seen;
    for (int q : g.qubits()) {
        if (q < 0 || q >= n_) throw std::invalid_argument("Circuit::add: qubit index out of range in " + g.name());
        if (!seen.insert(q).second) throw std::invalid_argument("Circuit::add: repeated qubit in " + g.name());
    }
    if (g.kind == GateKind::Swap && g.targets.size() != 2) throw std::invalid_argument("Circuit::add: swap needs two targets");
    if (g.kind != GateKind::Swap && g.kind != GateKind::PauliProduct && g.targets.size() != 1)
        throw std::invalid_argument("Circuit::add: one-qubit gate needs one target");
    if (g.kind == GateKind::PauliProduct && g.targets.size() != g.paulis.size())
        throw std::invalid_argument("Circuit::add: malformed Pauli product");
    gates_.push_back(std::move(g));
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_ > n_) throw std::invalid_argument("Circuit::append: register too small");
    for (const auto& g : other.gates_) add(g);
    return *this;
}

Circuit Circuit::inverse() const {
    Circuit c(n_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) c.gates_.push_back(it->inverse());
    return c;
}

Circuit Circuit::controlled_by(int control) const {
    Circuit c(n_);
    for (const auto& g : gates_) c.add(g.controlled_by(control));
    return c;
}

void Circuit::check_shift_rule() const {
    std::vector<int> uses(n_slots(), 0);
    for (const auto& g : gates_) {
        if (g.angle.slot < 0) continue;
        if (g.kind != GateKind::RX && g.kind != GateKind::RY)
            throw std::invalid_argument("parameter slot on unsupported gate " + g.name());
        if (std::abs(std::abs(g.angle.scale) - 1.0) > 0.0)
            throw std::invalid_argument("parameter slot with scale other than +-1 on " + g.name());
        ++uses[g.angle.slot];
    }
    for (std::size_t s = 0; s < uses.size(); ++s)
        if (uses[s] > 1) throw std::invalid_argument("parameter slot " + std::to_string(s) + " is read by several gates");
}

// ---- StateVector -------------------------------------------------------------

StateVector::StateVector(int n_qubits) : n_(n_qubits), amps_(std::size_t{1} << n_qubits, 0.0) {
    if (n_qubits < 1 || n_qubits > 20) throw std::invalid_argument("StateVector: qubit count out of range");
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
    StateVector sv(static_cast<int>(qubits_for_dim(amps.size())));
    sv.amps_ = std::move(amps);
    return sv;
}

void StateVector::apply_1q(const ComplexMatrix& u, int target, std::uint64_t control_mask) {
    const std::uint64_t t = bit_of(target, n_);
    for (std::uint64_t b = 0; b < amps_.size(); ++b) {
        if (b & t) continue;
        if ((b & control_mask) != control_mask) continue;
        const cplx a0 = amps_[b];
        const cplx a1 = amps_[b | t];
        amps_[b] = u(0, 0) * a0 + u(0, 1) * a1;
        amps_[b | t] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void StateVector::apply(const Gate& g, std::span<const double> theta) {
    std::uint64_t cmask = 0;
    for (int c : g.controls) cmask |= bit_of(c, n_);
    switch (g.kind) {
        case GateKind::Swap: {
            const auto a = bit_of(g.targets[0], n_);
            const auto b = bit_of(g.targets[1], n_);
            for (std::uint64_t i = 0; i < amps_.size(); ++i)
                if ((i & a) && !(i & b) && (i & cmask) == cmask) std::swap(amps_[i], amps_[(i & ~a) | b]);
            return;
        }
        case GateKind::PauliProduct: {
            std::uint64_t flip = 0, sign = 0;
            int ny = 0;
            for (std::size_t k = 0; k < g.targets.size(); ++k) {
                const auto m = bit_of(g.targets[k], n_);
                if (g.paulis[k] == Pauli::X || g.paulis[k] == Pauli::Y) flip |= m;
                if (g.paulis[k] == Pauli::Y || g.paulis[k] == Pauli::Z) sign |= m;
                if (g.paulis[k] == Pauli::Y) ++ny;
            }
            static const cplx kIPow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            const cplx base = kIPow[ny % 4];
            std::vector<cplx> out = amps_;
            for (std::uint64_t b = 0; b < amps_.size(); ++b) {
                if ((b & cmask) != cmask) continue;
                const cplx ph = (std::popcount(b & sign) & 1) ? -base : base;
                out[b ^ flip] = ph * amps_[b];
            }
            amps_ = std::move(out);
            return;
        }
        default: apply_1q(single_qubit_matrix(g, theta), g.targets[0], cmask);
    }
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
}

std::vector<double> StateVector::probabilities(std::span<const int> measured) const {
    const std::size_t m = measured.size();
    std::vector<double> p(std::size_t{1} << m, 0.0);
    for (std::uint64_t b = 0; b < amps_.size(); ++b) {
        std::uint64_t out = 0;
        for (std::size_t k = 0; k < m; ++k) out = (out << 1) | ((b & bit_of(measured[k], n_)) ? 1 : 0);
        p[out] += std::norm(amps_[b]);
    }
    return p;
}

StateVector run(const Circuit& c, std::span<const double> theta) {
    if (theta.size() < static_cast<std::size_t>(c.n_slots()))
        throw std::invalid_argument("run: " + std::to_string(c.n_slots()) + " parameter slots but " +
                                    std::to_string(theta.size()) + " values bound");
    StateVector sv(c.n_qubits());
    for (const auto& g : c.gates()) sv.apply(g, theta);
    return sv;
}

cplx expval_exact(const PauliSum& s, const StateVector& psi) { return expval_exact(s, psi.amplitudes()); }

// ---- Ansatz and overlap --------------------------------------------------------

Circuit ansatz(int n_qubits, int q0, int q1, const std::array<Angle, 3>& a) {
    Circuit c(n_qubits);
    c.add(Gate::ry(q0, a[0])).add(Gate::cnot(q0, q1)).add(Gate::ry(q0, a[1])).add(Gate::ry(q1, a[2]));
    return c;
}

Circuit ansatz() { return ansatz(2, 0, 1, {Angle::param(0), Angle::param(1), Angle::param(2)}); }

Circuit ansatz(std::span<const double> theta, int n_qubits, int q0, int q1) {
    if (theta.size() != 3) throw std::invalid_argument("ansatz: expects three angles");
    return ansatz(n_qubits, q0, q1, {Angle::fixed(theta[0]), Angle::fixed(theta[1]), Angle::fixed(theta[2])});
}

Circuit overlap_circuit(std::span<const double> theta_f) {
    Circuit c = ansatz();
    c.append(ansatz(theta_f).inverse());
    return c;
}

Circuit overlap_circuit(std::span<const double> theta_i, std::span<const double> theta_f) {
    Circuit c = ansatz(theta_i);
    c.append(ansatz(theta_f).inverse());
    return c;
}

std::array<double, 4> ansatz_amplitudes(std::span<const double> t) {
    const double c0 = std::cos(t[0] / 2), s0 = std::sin(t[0] / 2);
    const double c1 = std::cos(t[1] / 2), s1 = std::sin(t[1] / 2);
    const double c2 = std::cos(t[2] / 2), s2 = std::sin(t[2] / 2);
    // R|0> = (c, s), R|1> = (-s, c) on each qubit.
    const double a[2][2] = {{c1, -s1}, {s1, c1}};  // a[bit][schmidt index]
    const double b[2][2] = {{c2, -s2}, {s2, c2}};
    std::array<double, 4> out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[2 * i + j] = c0 * a[i][0] * b[j][0] + s0 * a[i][1] * b[j][1];
    return out;
}

// ---- Noise -------------------------------------------------------------------

NoiseModel NoiseModel::default_readout() { return {{{0.02, 0.03}}, 0.0, 0.0}; }
NoiseModel NoiseModel::default_depolarizing() { return {{}, 0.0005, 0.01}; }
NoiseModel NoiseModel::default_full() { return {{{0.02, 0.03}}, 0.0005, 0.01}; }

void NoiseModel::validate() const {
    auto ok = [](double p) { return p >= 0.0 && p < 1.0; };
    for (const auto& r : readout)
        if (!ok(r.p10) || !ok(r.p01)) throw std::invalid_argument("noise model: readout probabilities must be in [0, 1)");
    if (!ok(depol_1q) || !ok(depol_2q)) throw std::invalid_argument("noise model: depolarizing rates must be in [0, 1)");
}

ReadoutError NoiseModel::readout_for(int qubit) const {
    if (readout.empty()) return {};
    if (readout.size() == 1) return readout[0];
    if (qubit < 0 || static_cast<std::size_t>(qubit) >= readout.size())
        throw std::invalid_argument("noise model: no readout entry for qubit " + std::to_string(qubit));
    return readout[qubit];
}

bool NoiseModel::has_readout() const {
    return std::any_of(readout.begin(), readout.end(), [](const ReadoutError& r) { return r.p10 > 0 || r.p01 > 0; });
}

double NoiseModel::gate_error(const Gate& g) const { return g.qubits().size() == 1 ? depol_1q : depol_2q; }

namespace {

Gate random_fault(const Gate& g, RngStream& rng) {
    const auto qs = g.qubits();
    const std::uint64_t choices = (std::uint64_t{1} << (2 * qs.size())) - 1;
    std::uniform_int_distribution<std::uint64_t> pick(1, choices);
    const std::uint64_t code = pick(rng);
    std::vector<Pauli> ops(qs.size());
    for (std::size_t k = 0; k < qs.size(); ++k) ops[k] = static_cast<Pauli>((code >> (2 * k)) & 3);
    return Gate::pauli_product(PauliString(std::move(ops)), qs);
}

bool bernoulli(double p, RngStream& rng) { return p > 0.0 && rng.uniform() < p; }

std::uint64_t binomial(std::uint64_t n, double p, RngStream& rng) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::uint64_t> d(n, p);
    return d(rng);
}

std::uint64_t draw_index(std::span<const double> probs, RngStream& rng) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return k;
    }
    for (std::size_t k = probs.size(); k-- > 0;)
        if (probs[k] > 0.0) return k;
    return 0;
}

}  // namespace

Circuit apply_depolarizing(const Circuit& c, const NoiseModel& model, RngStream& rng) {
    Circuit out(c.n_qubits());
    for (const auto& g : c.gates()) {
        out.add(g);
        if (bernoulli(model.gate_error(g), rng)) out.add(random_fault(g, rng));
    }
    return out;
}

// ---- Sampling ----------------------------------------------------------------

Histogram sample_multinomial(std::span<const double> probs, std::uint64_t shots, RngStream& rng) {
    Histogram h(probs.size(), 0);
    double remaining_p = 0.0;
    for (double p : probs) remaining_p += std::max(0.0, p);
    std::uint64_t remaining = shots;
    for (std::size_t k = 0; k < probs.size() && remaining > 0; ++k) {
        const double p = std::max(0.0, probs[k]);
        if (k + 1 == probs.size() || remaining_p <= 0.0) {
            h[k] = remaining;
            remaining = 0;
            break;
        }
        const std::uint64_t c = binomial(remaining, std::min(1.0, p / remaining_p), rng);
        h[k] = c;
        remaining -= c;
        remaining_p -= p;
    }
    return h;
}

Histogram apply_readout(const Histogram& truth, std::span<const int> measured, const NoiseModel& noise, RngStream& rng) {
    const std::size_t m = measured.size();
    const std::size_t dim = std::size_t{1} << m;
    if (truth.size() != dim) throw std::invalid_argument("apply_readout: histogram size mismatch");
    Histogram out(dim, 0);
    std::vector<double> cond(dim);
    for (std::size_t t = 0; t < dim; ++t) {
        if (truth[t] == 0) continue;
        for (std::size_t r = 0; r < dim; ++r) {
            double p = 1.0;
            for (std::size_t k = 0; k < m; ++k) {
                const int shift = static_cast<int>(m - 1 - k);
                const bool tb = (t >> shift) & 1, rb = (r >> shift) & 1;
                const auto e = noise.readout_for(measured[k]);
                const double flip = tb ? e.p01 : e.p10;
                p *= tb == rb ? 1.0 - flip : flip;
            }
            cond[r] = p;
        }
        const auto h = sample_multinomial(cond, truth[t], rng);
        for (std::size_t r = 0; r < dim; ++r) out[r] += h[r];
    }
    return out;
}

Histogram measure_counts(const StateVector& psi, std::span<const int> measured, std::uint64_t shots, RngStream& rng,
                         const NoiseModel* noise) {
    if (shots < 1) throw std::invalid_argument("measure_counts: shots must be >= 1");
    auto h = sample_multinomial(psi.probabilities(measured), shots, rng);
    if (noise && noise->has_readout()) h = apply_readout(h, measured, *noise, rng);
    return h;
}

Histogram sample_circuit(const Circuit& c, std::span<const double> theta, std::span<const int> measured,
                         std::uint64_t shots, RngStream& rng, const NoiseModel* noise, SampleStats* stats) {
    if (shots < 1) throw std::invalid_argument("sample_circuit: shots must be >= 1");
    const bool gate_noise = noise && noise->has_gate_noise();
    if (!gate_noise) return measure_counts(run(c, theta), measured, shots, rng, noise);

    const auto& gates = c.gates();
    const std::size_t n_gates = gates.size();
    std::vector<double> p(n_gates);
    std::vector<double> first_fault(n_gates);  // P(first fault at g) = prod_{h<g}(1-p_h) p_g
    double survive = 1.0;
    for (std::size_t g = 0; g < n_gates; ++g) {
        p[g] = noise->gate_error(gates[g]);
        first_fault[g] = survive * p[g];
        survive *= 1.0 - p[g];
    }

    // Noiseless prefix states: prefix[g] is the state after gate g.
    std::vector<StateVector> prefix;
    prefix.reserve(n_gates);
    StateVector sv(c.n_qubits());
    for (const auto& g : gates) {
        sv.apply(g, theta);
        prefix.push_back(sv);
    }

    const std::uint64_t clean = binomial(shots, survive, rng);
    Histogram h = clean > 0 ? sample_multinomial(sv.probabilities(measured), clean, rng)
                            : Histogram(std::size_t{1} << measured.size(), 0);
    const std::uint64_t faulty = shots - clean;
    std::uint64_t faults = 0;
    for (std::uint64_t s = 0; s < faulty; ++s) {
        const std::size_t g0 = draw_index(first_fault, rng);
        StateVector traj = prefix[g0];
        traj.apply(random_fault(gates[g0], rng));
        ++faults;
        for (std::size_t g = g0 + 1; g < n_gates; ++g) {
            traj.apply(gates[g], theta);
            if (bernoulli(p[g], rng)) {
                traj.apply(random_fault(gates[g], rng));
                ++faults;
            }
        }
        ++h[draw_index(traj.probabilities(measured), rng)];
    }
    if (stats) {
        stats->faulty_shots += faulty;
        stats->faults += faults;
    }
    if (noise->has_readout()) h = apply_readout(h, measured, *noise, rng);
    return h;
}

// ---- Execution ---------------------------------------------------------------

Distribution measure(const Circuit& c, std::span<const double> theta, std::span<const int> measured, const Exec& exec,
                     StreamKey key) {
    if (exec.exact()) return {run(c, theta).probabilities(measured), 0};
    RngStream rng(key);
    const auto h = sample_circuit(c, theta, measured, exec.config.shots, rng, exec.noise());
    Distribution d;
    d.shots = exec.config.shots;
    if (exec.corrector) {
        d.probs = exec.corrector->correct(h, measured);
    } else {
        d.probs.resize(h.size());
        for (std::size_t k = 0; k < h.size(); ++k) d.probs[k] = static_cast<double>(h[k]) / static_cast<double>(d.shots);
    }
    return d;
}

Estimate probability(const Distribution& d, std::uint64_t outcome) {
    const double p = d.probs.at(outcome);
    if (d.shots == 0) return {p, 0.0};
    const double q = std::clamp(p, 0.0, 1.0);
    return {p, std::sqrt(q * (1.0 - q) / static_cast<double>(d.shots))};
}

Estimate parity(const Distribution& d) {
    double m = 0.0;
    for (std::size_t b = 0; b < d.probs.size(); ++b) m += (std::popcount(b) & 1 ? -1.0 : 1.0) * d.probs[b];
    if (d.shots == 0) return {m, 0.0};
    return {m, std::sqrt(std::max(0.0, 1.0 - m * m) / static_cast<double>(d.shots))};
}

Circuit measurement_basis(const PauliString& p, int n_qubits) {
    Circuit c(n_qubits);
    for (std::size_t q = 0; q < p.size(); ++q) {
        if (p[q] == Pauli::X) c.add(Gate::ry(static_cast<int>(q), Angle::fixed(-std::numbers::pi / 2)));
        if (p[q] == Pauli::Y) c.add(Gate::rx(static_cast<int>(q), Angle::fixed(std::numbers::pi / 2)));
    }
    return c;
}

Estimate expval_sampled(const PauliSum& s, const Circuit& prep, std::span<const double> theta, const Exec& exec,
                        StreamKey key) {
    if (!s.is_hermitian()) throw std::invalid_argument("expval_sampled: Pauli sum is not Hermitian");
    if (static_cast<int>(s.n_qubits()) > prep.n_qubits()) throw std::invalid_argument("expval_sampled: register too small");
    Estimate total;
    double var = 0.0;
    const auto& terms = s.terms();
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto& t = terms[k];
        const double c = t.coeff.real();
        if (t.string.is_identity()) {
            total.value += c;
            continue;
        }
        Circuit circ = prep;
        circ.append(measurement_basis(t.string, prep.n_qubits()));
        std::vector<int> support;
        for (std::size_t q = 0; q < t.string.size(); ++q)
            if (t.string[q] != Pauli::I) support.push_back(static_cast<int>(q));
        const auto e = parity(measure(circ, theta, support, exec, key.child(k)));
        total.value += c * e.value;
        var += c * c * e.error * e.error;
    }
    total.error = std::sqrt(var);
    return total;
}

}  // namespace qcharm
