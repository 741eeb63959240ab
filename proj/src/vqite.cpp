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

#include "qcharm/vqite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcharm {

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<int> kPair{0, 1};

// Overlap probability |<phi|psi(theta)>|^2 via the inverse-ansatz circuit.
Estimate overlap_probability(const Theta& theta, const Theta& phi, const Exec& exec, StreamKey key) {
    return probability(measure(overlap_circuit(phi), theta, kPair, exec, key), 0);
}

}  // namespace

double EvolutionConfig::regularization(const Exec& exec) const {
    if (epsilon) return *epsilon;
    return exec.exact() ? 1e-6 : 1e-3;
}

void EvolutionConfig::validate() const {
    if (!(dtau > 0.0)) throw std::invalid_argument("evolution: dtau must be positive");
    if (max_steps < 1) throw std::invalid_argument("evolution: max_steps must be >= 1");
    if (stop_window < 1) throw std::invalid_argument("evolution: stop_window must be >= 1");
    if (epsilon && *epsilon < 0.0) throw std::invalid_argument("evolution: epsilon must be >= 0");
}

Estimate energy(const Theta& theta, const PauliSum& h, const Deflation& deflation, const Exec& exec, StreamKey key) {
    Estimate e;
    if (exec.exact()) {
        e.value = expval_exact(h, run(ansatz(), theta)).real();
    } else {
        e = expval_sampled(h, ansatz(), theta, exec, key);
    }
    double var = e.error * e.error;
    for (std::size_t k = 0; k < deflation.states.size(); ++k) {
        const auto o = overlap_probability(theta, deflation.states[k], exec, key.child(1000 + k));
        e.value += deflation.alpha * o.value;
        var += deflation.alpha * deflation.alpha * o.error * o.error;
    }
    e.error = std::sqrt(var);
    return e;
}

std::vector<double> shift_gradient(const Circuit& circuit, const ScalarFn& f, const Theta& theta) {
    circuit.check_shift_rule();
    std::vector<double> g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        Theta plus = theta, minus = theta;
        plus[i] += kPi / 2;
        minus[i] -= kPi / 2;
        g[i] = 0.5 * (f(plus, 2 * i) - f(minus, 2 * i + 1));
    }
    return g;
}

RealMatrix metric(const Theta& theta, const Exec& exec, StreamKey key) {
    const Circuit circ = overlap_circuit(theta);
    circ.check_shift_rule();
    auto p = [&](const Theta& t, std::uint64_t id) {
        return probability(measure(circ, t, kPair, exec, key.child(id)), 0).value;
    };
    const std::size_t n = theta.size();
    RealMatrix a(n, n);
    const double center = p(theta, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Theta plus = theta, minus = theta;
        plus[i] += kPi;
        minus[i] -= kPi;
        const double hess = (p(plus, 1 + 2 * i) - 2.0 * center + p(minus, 2 + 2 * i)) / 4.0;
        a(i, i) = -0.5 * hess;
    }
    std::uint64_t id = 100;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, id += 4) {
            auto shifted = [&](double si, double sj) {
                Theta t = theta;
                t[i] += si;
                t[j] += sj;
                return t;
            };
            const double s = kPi / 2;
            const double hess = (p(shifted(s, s), id) - p(shifted(s, -s), id + 1) - p(shifted(-s, s), id + 2) +
                                 p(shifted(-s, -s), id + 3)) /
                                4.0;
            a(i, j) = a(j, i) = -0.5 * hess;
        }
    return a;
}

std::vector<double> solve_mclachlan(const RealMatrix& a, std::span<const double> c, double eps, bool* used_pinv,
                                    double* condition) {
    RealMatrix m = a;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += eps;
    // Symmetrize away sampling asymmetry before the solve.
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));

    const auto eig = jacobi_eigen(m);
    if (condition) {
        const double lo = std::abs(eig.values.front()), hi = std::abs(eig.values.back());
        *condition = lo > 0.0 ? std::max(lo, hi) / std::min(lo, hi) : std::numeric_limits<double>::infinity();
    }
    std::vector<double> x;
    bool pinv = false;
    if (!cholesky_solve(m, c, x)) {
        x = pseudo_inverse_solve(m, c, 1e-8);
        pinv = true;
    }
    if (used_pinv) *used_pinv = pinv;
    for (double v : x)
        if (!std::isfinite(v)) throw SolverError("McLachlan solve produced a non-finite update", a, {c.begin(), c.end()});
    return x;
}

StepResult step(const Theta& theta, const PauliSum& h, const Deflation& deflation, const EvolutionConfig& config,
                const Exec& exec, StreamKey key) {
    StepResult out;
    auto& sys = out.system;
    const auto e0 = energy(theta, h, deflation, exec, key.child(0));
    sys.energy = e0.value;
    sys.energy_error = e0.error;
    const StreamKey grad_key = key.child(1);
    ScalarFn f = [&](const Theta& t, std::uint64_t id) { return energy(t, h, deflation, exec, grad_key.child(id)).value; };
    const auto grad = shift_gradient(ansatz(), f, theta);
    sys.c.resize(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) sys.c[i] = -grad[i];
    sys.a = metric(theta, exec, key.child(2));
    sys.theta_dot = solve_mclachlan(sys.a, sys.c, config.regularization(exec), &sys.pseudo_inverse, &sys.condition);
    out.theta = theta;
    for (std::size_t i = 0; i < theta.size(); ++i) out.theta[i] += config.dtau * sys.theta_dot[i];
    return out;
}

EvolutionTrace evolve(const PauliSum& h, const EvolutionConfig& config, const Deflation& deflation, const Exec& exec,
                      StreamKey key) {
    config.validate();
    EvolutionTrace trace;
    Theta theta(3, config.theta_init);
    for (int k = 0; k < config.max_steps; ++k) {
        const auto res = step(theta, h, deflation, config, exec, key.child(k));
        TraceRow row;
        row.step = k;
        row.tau = k * config.dtau;
        row.theta = theta;
        row.energy = res.system.energy;
        row.energy_error = res.system.energy_error;
        double norm = 0.0;
        for (double v : res.system.theta_dot) norm += v * v;
        row.theta_dot_norm = std::sqrt(norm);
        row.condition = res.system.condition;
        trace.rows.push_back(std::move(row));
        theta = res.theta;
        if (exec.exact() && k >= config.stop_window &&
            std::abs(trace.rows[k].energy - trace.rows[k - config.stop_window].energy) < config.stop_tol) {
            trace.converged = true;
            break;
        }
    }
    if (!exec.exact()) trace.converged = true;  // fixed-length run
    trace.theta_star = theta;
    const auto e = energy(theta, h, Deflation{{}, deflation.alpha}, exec, key.child(config.max_steps + 1));
    trace.energy_star = e.value;
    trace.energy_star_error = e.error;
    return trace;
}

double gershgorin_range(const PauliSum& h) {
    const auto m = reconstruct(h);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (j != i) r += std::abs(m(i, j));
        lo = std::min(lo, m(i, i).real() - r);
        hi = std::max(hi, m(i, i).real() + r);
    }
    return hi - lo;
}

SpectrumRun spectrum(const PauliSum& h, const EvolutionConfig& config, int n_states, const Exec& exec, StreamKey key,
                     const std::vector<Theta>& prior) {
    if (n_states < 1 || static_cast<std::size_t>(n_states) + prior.size() > 4) throw std::invalid_argument("spectrum: at most 4 states in total");
    if (static_cast<std::size_t>(n_states) + prior.size() > 1 && !(config.penalty_alpha > gershgorin_range(h)))
        throw std::invalid_argument("spectrum: penalty alpha does not exceed the spectral range of H");
    SpectrumRun out;
    Deflation deflation{prior, config.penalty_alpha};
    for (int s = 0; s < n_states; ++s) {
        SpectrumState st;
        st.trace = evolve(h, config, deflation, exec, key.child(s));
        st.theta = st.trace.theta_star;
        st.energy = st.trace.energy_star;
        st.energy_error = st.trace.energy_star_error;
        st.converged = st.trace.converged;
        out.all_converged = out.all_converged && st.converged;
        deflation.states.push_back(st.theta);
        out.states.push_back(std::move(st));
    }
    std::stable_sort(out.states.begin(), out.states.end(),
                     [](const SpectrumState& a, const SpectrumState& b) { return a.energy < b.energy; });
    return out;
}

}  // namespace qcharm
