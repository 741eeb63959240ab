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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcharm/linalg.hpp"
#include "qcharm/pauli.hpp"
#include "qcharm/rng.hpp"
#include "qcharm/simulator.hpp"

namespace qcharm {

using Theta = std::vector<double>;

struct EvolutionConfig {
    double dtau = 0.02;
    double theta_init = 0.5;
    int max_steps = 300;
    double stop_tol = 1e-4;  // |E_k - E_{k-window}|, exact mode only
    int stop_window = 10;
    double penalty_alpha = 20.0;  // fm^-1
    /// Tikhonov shift; unset means 1e-6 in exact mode and 1e-3 when sampling.
    std::optional<double> epsilon;

    double regularization(const Exec& exec) const;
    /// Throws std::invalid_argument on nonsensical values.
    void validate() const;
};

/// Previously converged states and the weight of their overlap penalty.
struct Deflation {
    std::vector<Theta> states;
    double alpha = 20.0;
};

/// Scalar circuit function of theta; `eval_id` picks the random stream for
/// sampled evaluations so repeated calls are reproducible.
using ScalarFn = std::function<double(const Theta& theta, std::uint64_t eval_id)>;

/// <psi(theta)|H|psi(theta)> + alpha sum_k |<phi_k|psi(theta)>|^2.
Estimate energy(const Theta& theta, const PauliSum& h, const Deflation& deflation, const Exec& exec, StreamKey key);

/// Parameter-shift gradient [f(theta + pi/2 e_i) - f(theta - pi/2 e_i)] / 2.
/// `circuit` is checked for shift-rule compatibility first.
std::vector<double> shift_gradient(const Circuit& circuit, const ScalarFn& f, const Theta& theta);

/// A_ij = -1/2 d^2 p / dtheta_i dtheta_j, p = P(00) of the overlap circuit
/// against a frozen copy of theta. Diagonal by the pi-shift rule, off-diagonal
/// by the four-point pi/2 rule.
RealMatrix metric(const Theta& theta, const Exec& exec, StreamKey key);

struct McLachlanSystem {
    RealMatrix a;
    std::vector<double> c;
    std::vector<double> theta_dot;
    double energy = 0.0;
    double energy_error = 0.0;
    double condition = 0.0;   // largest / smallest eigenvalue of A + eps I
    bool pseudo_inverse = false;
};

class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, RealMatrix a, std::vector<double> c)
        : std::runtime_error(what), a_(std::move(a)), c_(std::move(c)) {}
    const RealMatrix& a() const { return a_; }
    const std::vector<double>& c() const { return c_; }

  private:
    RealMatrix a_;
    std::vector<double> c_;
};

/// Solves (A + eps I) theta_dot = C by Cholesky, falling back to a pseudo-inverse
/// with cutoff 1e-8 sigma_max. Throws SolverError on non-finite output.
std::vector<double> solve_mclachlan(const RealMatrix& a, std::span<const double> c, double eps,
                                    bool* used_pseudo_inverse = nullptr, double* condition = nullptr);

struct StepResult {
    Theta theta;  // updated parameters
    McLachlanSystem system;
};

/// One Euler step theta + dtau theta_dot, with C = -grad E.
StepResult step(const Theta& theta, const PauliSum& h, const Deflation& deflation, const EvolutionConfig& config,
                const Exec& exec, StreamKey key);

struct TraceRow {
    int step = 0;
    double tau = 0.0;
    Theta theta;
    double energy = 0.0;  // penalized cost at theta
    double energy_error = 0.0;
    double theta_dot_norm = 0.0;
    double condition = 0.0;
};

struct EvolutionTrace {
    std::vector<TraceRow> rows;
    bool converged = false;
    Theta theta_star;
    double energy_star = 0.0;  // <H> at theta_star, no penalty
    double energy_star_error = 0.0;
};

EvolutionTrace evolve(const PauliSum& h, const EvolutionConfig& config, const Deflation& deflation, const Exec& exec,
                      StreamKey key);

struct SpectrumState {
    Theta theta;
    double energy = 0.0;
    double energy_error = 0.0;
    bool converged = false;
    EvolutionTrace trace;
};

struct SpectrumRun {
    std::vector<SpectrumState> states;  // sorted by energy
    bool all_converged = true;
};

/// Sequential evolutions, each deflating `prior` and all earlier ones. Throws
/// std::invalid_argument if the penalty does not exceed the Gershgorin
/// estimate of the spectral range of H.
SpectrumRun spectrum(const PauliSum& h, const EvolutionConfig& config, int n_states, const Exec& exec, StreamKey key,
                     const std::vector<Theta>& prior = {});

/// Upper bound on lambda_max - lambda_min from Gershgorin discs.
double gershgorin_range(const PauliSum& h);

}  // namespace qcharm
