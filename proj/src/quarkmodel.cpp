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

#include "qcharm/quarkmodel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "qcharm/parallel.hpp"

namespace qcharm {

ModelParams ModelParams::from_gev(double alpha_s, double b_gev2, double m_c_gev, double sigma_gev, double hbar_c) {
    ModelParams p;
    p.alpha_s = alpha_s;
    p.hbar_c = hbar_c;
    p.b_conf = b_gev2 / (hbar_c * hbar_c);
    p.m_c = m_c_gev / hbar_c;
    p.sigma = sigma_gev / hbar_c;
    p.a_coul = 4.0 * alpha_s / 3.0;
    p.mu = p.m_c / 2.0;
    return p;
}

ModelParams ModelParams::charmonium() { return from_gev(0.5461, 0.1425, 1.4794, 1.0946); }

double ModelParams::hyperfine_coupling() const {
    return 32.0 * std::numbers::pi * alpha_s / (9.0 * m_c * m_c);
}

double ModelParams::hyperfine_strength() const {
    const double s = sigma / std::sqrt(std::numbers::pi);
    return hyperfine_coupling() * s * s * s;
}

Channel channel(ChannelId id) {
    switch (id) {
        case ChannelId::Singlet1S0: return {id, "1S0", 0, -0.75};
        case ChannelId::Triplet3S1: return {id, "3S1", 0, 0.25};
        case ChannelId::Singlet1P1: return {id, "1P1", 1, -0.75};
    }
    throw std::invalid_argument("unknown channel id");
}

Channel channel_from_label(std::string_view label) {
    for (auto id : kAllChannels) {
        const Channel ch = channel(id);
        if (ch.label == label) return ch;
    }
    throw std::invalid_argument("unknown channel '" + std::string(label) + "' (expected 1S0, 3S1 or 1P1)");
}

BasisSpec BasisSpec::make(int l, double omega, double mu, int n_states) {
    if (!(omega > 0.0)) throw std::invalid_argument("BasisSpec: omega must be positive");
    if (n_states < 1) throw std::invalid_argument("BasisSpec: n_states must be >= 1");
    BasisSpec s;
    s.omega = omega;
    s.nu = mu * omega;
    s.n_states = n_states;
    s.l = l;
    return s;
}

BasisSpec BasisSpec::make(const Channel& ch, double omega, const ModelParams& params, int n_states) {
    return make(ch.l, omega, params.mu, n_states);
}

std::string_view to_string(MatrixSource s) { return s == MatrixSource::Computed ? "computed" : "literal"; }
std::string_view to_string(MatrixUnits u) { return u == MatrixUnits::InverseFm ? "fm^-1" : "fm"; }

RealMatrix HamiltonianMatrix::real() const {
    RealMatrix r(entries.rows(), entries.cols());
    for (std::size_t i = 0; i < entries.rows(); ++i)
        for (std::size_t j = 0; j < entries.cols(); ++j) {
            if (std::abs(entries(i, j).imag()) > 1e-12)
                throw std::invalid_argument("HamiltonianMatrix: entry has a nonzero imaginary part");
            r(i, j) = entries(i, j).real();
        }
    return r;
}

double potential(double r, const ModelParams& p, const Channel& ch) {
    if (!(r > 0.0)) throw std::domain_error("potential: r must be positive");
    const double spin = ch.spin_factor * p.hyperfine_strength() * std::exp(-p.sigma * p.sigma * r * r);
    return -p.a_coul / r + p.b_conf * r + spin;
}

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: negative degree");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double ho_radial(int n, int l, double nu, double r) {
    // N^2 = 2 nu^{l+3/2} n! / Gamma(n + l + 3/2)
    const double log_norm2 =
        std::log(2.0) + (l + 1.5) * std::log(nu) + std::lgamma(n + 1.0) - std::lgamma(n + l + 1.5);
    const double x = nu * r * r;
    return std::exp(0.5 * log_norm2 - 0.5 * x) * std::pow(r, l + 1) * laguerre(n, l + 0.5, x);
}

QuadratureError::QuadratureError(int row, int col, double error_estimate)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "radial quadrature did not converge at entry (" << row << "," << col
             << "), error estimate " << error_estimate;
          return os.str();
      }()),
      row_(row),
      col_(col),
      error_estimate_(error_estimate) {}

double radial_integral(const std::function<double(double)>& f, double lo, double hi, double abs_tol, int row,
                       int col) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 25, 1e-14, &error);
    if (!std::isfinite(value) || error > abs_tol) throw QuadratureError(row, col, error);
    return value;
}

HamiltonianMatrix ho_matrix(const Channel& ch, const BasisSpec& spec, const ModelParams& params) {
    if (spec.l != ch.l) throw std::invalid_argument("ho_matrix: basis l does not match the channel");
    const int n = spec.n_states;
    const double half_k = 0.5 * params.mu * spec.omega * spec.omega;
    HamiltonianMatrix h;
    h.entries = ComplexMatrix(n, n);
    h.units = MatrixUnits::InverseFm;
    h.source = MatrixSource::Computed;
    h.channel = std::string(ch.label);

    // Evaluate every entry and keep the worst quadrature failure for the diagnostic.
    std::optional<QuadratureError> worst;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            auto integrand = [&](double r) {
                if (r <= 0.0) return 0.0;
                const double w = potential(r, params, ch) - half_k * r * r;
                return ho_radial(i, ch.l, spec.nu, r) * w * ho_radial(j, ch.l, spec.nu, r);
            };
            double v = 0.0;
            try {
                v = radial_integral(integrand, 0.0, kRadialCutoff, kQuadratureAbsTol, i, j);
            } catch (const QuadratureError& e) {
                if (!worst || e.error_estimate() > worst->error_estimate()) worst = e;
                continue;
            }
            if (i == j) v += spec.ho_energy(i + 1);
            h.entries(i, j) = v;
            h.entries(j, i) = v;
        }
    }
    if (worst) throw *worst;
    return h;
}

HamiltonianMatrix e1_matrix(const BasisSpec& s_wave, const BasisSpec& p_wave) {
    if (s_wave.l != 0 || p_wave.l != 1) throw std::invalid_argument("e1_matrix: expects an l=0 and an l=1 basis");
    if (s_wave.n_states != p_wave.n_states || std::abs(s_wave.nu - p_wave.nu) > 1e-14 * s_wave.nu)
        throw std::invalid_argument("e1_matrix: bases must share omega and n_states");
    const int n = s_wave.n_states;
    HamiltonianMatrix m;
    m.entries = ComplexMatrix(n, n);
    m.units = MatrixUnits::Fm;
    m.source = MatrixSource::Computed;
    m.channel = "E1";
    for (int row = 0; row < n; ++row)
        for (int col = 0; col < n; ++col) {
            auto integrand = [&](double r) {
                return ho_radial(row, 1, p_wave.nu, r) * r * ho_radial(col, 0, s_wave.nu, r);
            };
            m.entries(row, col) = radial_integral(integrand, 0.0, kRadialCutoff, kQuadratureAbsTol, row, col);
        }
    return m;
}

SpectrumResult diagonalize(const HamiltonianMatrix& h) {
    auto eig = jacobi_eigen(h.real(), 1e-12);
    const std::size_t n = eig.values.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t big = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(eig.vectors(i, k)) > std::abs(eig.vectors(big, k))) big = i;
        if (eig.vectors(big, k) < 0.0)
            for (std::size_t i = 0; i < n; ++i) eig.vectors(i, k) = -eig.vectors(i, k);
    }
    return {std::move(eig.values), std::move(eig.vectors)};
}

double mass_from_energy(double energy, const ModelParams& params) {
    return 1000.0 * (energy * params.hbar_c + 2.0 * params.m_c_gev());
}

std::vector<SweepRow> sweep_omega(const Channel& ch, std::span<const double> omegas, const ModelParams& params,
                                  int n_states, int jobs) {
    for (double w : omegas)
        if (!(w > 0.0)) throw std::invalid_argument("sweep_omega: omega must be positive");
    std::vector<SweepRow> rows(omegas.size());
    parallel_for(omegas.size(), jobs, [&](std::size_t k) {
        const auto spec = BasisSpec::make(ch, omegas[k], params, n_states);
        rows[k] = {omegas[k], diagonalize(ho_matrix(ch, spec, params)).values};
    });
    return rows;
}

}  // namespace qcharm
