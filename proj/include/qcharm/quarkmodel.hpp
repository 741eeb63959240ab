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
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcharm/linalg.hpp"

namespace qcharm {

/// GeV * fm.
inline constexpr double kHbarC = 0.19732;

/// Quark-model couplings. Inputs are quoted in GeV; everything used by the
/// solvers lives in fm units (hbar = c = 1, energies in fm^-1).
struct ModelParams {
    double alpha_s = 0.0;
    double b_conf = 0.0;  // fm^-2
    double m_c = 0.0;     // fm^-1
    double sigma = 0.0;   // fm^-1
    double a_coul = 0.0;  // 4 alpha_s / 3
    double mu = 0.0;      // reduced mass, m_c / 2, fm^-1
    double hbar_c = kHbarC;

    static ModelParams from_gev(double alpha_s, double b_gev2, double m_c_gev, double sigma_gev,
                                double hbar_c = kHbarC);
    /// alpha_s = 0.5461, b = 0.1425 GeV^2, m_c = 1.4794 GeV, sigma = 1.0946 GeV.
    static ModelParams charmonium();

    double b_gev2() const { return b_conf * hbar_c * hbar_c; }
    double m_c_gev() const { return m_c * hbar_c; }
    double sigma_gev() const { return sigma * hbar_c; }

    /// 32 pi alpha_s / (9 m_c^2) in fm^2.
    double hyperfine_coupling() const;
    /// Hyperfine coupling times the smeared delta at the origin, (sigma/sqrt(pi))^3, in fm^-1.
    double hyperfine_strength() const;
};

enum class ChannelId { Singlet1S0, Triplet3S1, Singlet1P1 };

struct Channel {
    ChannelId id;
    std::string_view label;
    int l;
    double spin_factor;  // <S_c . S_cbar>: -3/4 singlet, +1/4 triplet
};

inline constexpr std::array<ChannelId, 3> kAllChannels{ChannelId::Singlet1S0, ChannelId::Triplet3S1,
                                                       ChannelId::Singlet1P1};

Channel channel(ChannelId id);
/// Accepts "1S0", "3S1", "1P1". Throws std::invalid_argument otherwise.
Channel channel_from_label(std::string_view label);

struct BasisSpec {
    double omega = 1.2;  // fm^-1
    double nu = 0.0;     // mu * omega, fm^-2
    int n_states = 4;
    int l = 0;

    static BasisSpec make(const Channel& ch, double omega, const ModelParams& params, int n_states = 4);
    static BasisSpec make(int l, double omega, double mu, int n_states = 4);

    /// Oscillator energy of basis state n = 1..n_states: omega (2n + l - 1/2).
    double ho_energy(int n) const { return omega * (2.0 * n + l - 0.5); }
};

enum class MatrixSource { Computed, Literal };
enum class MatrixUnits { InverseFm, Fm };

std::string_view to_string(MatrixSource s);
std::string_view to_string(MatrixUnits u);

struct HamiltonianMatrix {
    ComplexMatrix entries;
    MatrixUnits units = MatrixUnits::InverseFm;
    MatrixSource source = MatrixSource::Computed;
    std::string channel;

    std::size_t dim() const { return entries.rows(); }
    /// Real part; throws std::invalid_argument if any |imag| exceeds 1e-12.
    RealMatrix real() const;
};

/// V(r) = -a/r + b r + spin_factor * hyperfine_coupling * (sigma/sqrt(pi))^3 exp(-sigma^2 r^2).
/// Throws std::domain_error for r <= 0.
double potential(double r, const ModelParams& params, const Channel& ch);

/// Orthonormal reduced radial oscillator function u_{n,l}(r), n = 0, 1, ...,
/// built on the generalized Laguerre polynomial L_n^{l+1/2}(nu r^2); positive
/// at small r.
double ho_radial(int n, int l, double nu, double r);

/// Generalized Laguerre polynomial L_n^alpha(x) by three-term recurrence.
double laguerre(int n, double alpha, double x);

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(int row, int col, double error_estimate);
    int row() const { return row_; }
    int col() const { return col_; }
    double error_estimate() const { return error_estimate_; }

  private:
    int row_;
    int col_;
    double error_estimate_;
};

/// Adaptive Gauss-Kronrod integral of f over [lo, hi]; throws when the error
/// estimate stays above `abs_tol`. The (row, col) pair is carried for diagnostics.
double radial_integral(const std::function<double(double)>& f, double lo, double hi, double abs_tol, int row = -1,
                       int col = -1);

inline constexpr double kRadialCutoff = 20.0;      // fm
inline constexpr double kQuadratureAbsTol = 1e-9;  // absolute

/// Truncated oscillator-basis matrix of H_HO + V(r) - mu omega^2 r^2 / 2.
/// Each unordered pair is integrated once, so the result is exactly symmetric.
HamiltonianMatrix ho_matrix(const Channel& ch, const BasisSpec& spec, const ModelParams& params);

/// Radial dipole matrix <u_{n,l=1}| r |u_{n',l=0}> in fm. Rows index the
/// P-wave basis, columns the S-wave basis, which makes the matrix upper
/// bidiagonal under the positive-at-origin phase convention.
HamiltonianMatrix e1_matrix(const BasisSpec& s_wave, const BasisSpec& p_wave);

struct SpectrumResult {
    std::vector<double> values;  // ascending, fm^-1
    RealMatrix vectors;          // column k is the eigenvector of values[k]
};

/// Cyclic-Jacobi diagonalization of a real symmetric matrix. Each eigenvector
/// is signed so its largest-magnitude component is positive.
SpectrumResult diagonalize(const HamiltonianMatrix& h);

/// E * hbar_c + 2 m_c, in MeV.
double mass_from_energy(double energy, const ModelParams& params);

struct SweepRow {
    double omega;
    std::vector<double> eigenvalues;
};

/// ho_matrix + diagonalize for every omega; rows come back in input order.
std::vector<SweepRow> sweep_omega(const Channel& ch, std::span<const double> omegas, const ModelParams& params,
                                  int n_states = 4, int jobs = 1);

// ---- Literal matrices --------------------------------------------------------

/// Reference oscillator-basis matrices at omega = 1.2 fm^-1. Corrected repairs
/// the transcription errors listed in literal.cpp; Verbatim keeps them.
enum class LiteralVariant { Corrected, Verbatim };

HamiltonianMatrix literal_hamiltonian(ChannelId id, LiteralVariant variant = LiteralVariant::Corrected);
HamiltonianMatrix literal_e1(LiteralVariant variant = LiteralVariant::Corrected);

/// Eigenvalues at omega = 1.2 fm^-1 as tabulated alongside the literal matrices.
std::array<double, 4> published_truncated_spectrum(ChannelId id);

// ---- Radial Schroedinger oracle ---------------------------------------------

struct RadialGrid {
    double h = 0.001;     // fm
    double r_max = 15.0;  // fm
};

struct EnergyBracket {
    double lo = -5.0;  // fm^-1
    double hi = 15.0;
};

struct RadialSolution {
    std::vector<double> r;  // uniform grid starting at 0
    std::vector<double> u;  // u(0) = 0, unit L2 norm by trapezoid rule
    double energy = 0.0;    // fm^-1
    int node_count = 0;
    int level = 0;  // 0-based
    std::string channel;
};

class RadialSolveError : public std::runtime_error {
  public:
    RadialSolveError(int level, const std::string& what);
    int level() const { return level_; }

  private:
    int level_;
};

/// Lowest `n_levels` bound states of the radial equation by Numerov shooting:
/// bisection on the node count, then secant refinement of the log-derivative
/// mismatch at the outer turning point.
std::vector<RadialSolution> solve_radial(const Channel& ch, const ModelParams& params, int n_levels,
                                         RadialGrid grid = {}, EnergyBracket bracket = {});

/// Same solver for an arbitrary central potential (fm^-1) and angular momentum.
std::vector<RadialSolution> solve_radial(const std::function<double(double)>& central, int l, double mu,
                                         int n_levels, RadialGrid grid = {}, EnergyBracket bracket = {},
                                         std::string label = {});

enum class OverlapWeight { One, R };

/// Trapezoid-rule integral of u_f w(r) u_i. Throws std::invalid_argument if
/// the two solutions do not share a grid.
double grid_overlap(const RadialSolution& final_state, const RadialSolution& initial_state, OverlapWeight weight);

}  // namespace qcharm
