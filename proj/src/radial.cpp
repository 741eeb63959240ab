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

#include <algorithm>
#include <cmath>
#include <string>

#include "qcharm/quarkmodel.hpp"

namespace qcharm {

RadialSolveError::RadialSolveError(int level, const std::string& what)
    : std::runtime_error("radial level " + std::to_string(level) + ": " + what), level_(level) {}

namespace {

// u'' = -f(r) u with f = 2 mu (E - V) - l(l+1)/r^2.
class Numerov {
  public:
    Numerov(const std::function<double(double)>& central, int l, double mu, RadialGrid grid)
        : l_(l), mu_(mu), h_(grid.h) {
        n_ = static_cast<std::size_t>(std::llround(grid.r_max / grid.h)) + 1;
        r_.resize(n_);
        v_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            r_[k] = k * h_;
            v_[k] = k == 0 ? 0.0 : central(r_[k]) + l * (l + 1) / (2.0 * mu * r_[k] * r_[k]);
        }
        // Limit of f u at the origin for u ~ r^{l+1}: the Coulomb term survives
        // for l = 0, the centrifugal term for l = 1. Only the Coulomb
        // coefficient is needed, taken from the potential's 1/r behaviour.
        const double r_small = 1e-6;
        const double coulomb = central(r_small) * r_small;  // -a
        origin_fu_ = l == 0 ? -2.0 * mu * coulomb : (l == 1 ? -2.0 : 0.0);
    }

    std::size_t size() const { return n_; }
    const std::vector<double>& r() const { return r_; }
    double h() const { return h_; }

    double f(std::size_t k, double e) const { return 2.0 * mu_ * (e - v_[k]); }

    /// Outward integration over the full grid; returns node count.
    int nodes_outward(double e) const {
        std::vector<double> u;
        outward(e, n_ - 1, u);
        int nodes = 0;
        for (std::size_t k = 2; k < u.size(); ++k)
            if ((u[k] < 0.0) != (u[k - 1] < 0.0)) ++nodes;
        return nodes;
    }

    /// Fills u[0..last] from u(0) = 0, u(h) = h^{l+1}.
    void outward(double e, std::size_t last, std::vector<double>& u) const {
        u.assign(last + 1, 0.0);
        const double c = h_ * h_ / 12.0;
        u[1] = std::pow(h_, l_ + 1);
        double w_prev = c * origin_fu_;  // (1 + c f_0) u_0 with u_0 = 0
        for (std::size_t k = 1; k < last; ++k) {
            const double fk = f(k, e);
            const double fn = f(k + 1, e);
            const double next = (2.0 * u[k] * (1.0 - 5.0 * c * fk) - w_prev) / (1.0 + c * fn);
            w_prev = (1.0 + c * fk) * u[k];
            u[k + 1] = next;
            if (std::abs(next) > 1e150) {
                for (std::size_t j = 0; j <= k + 1; ++j) u[j] *= 1e-150;
                w_prev *= 1e-150;
            }
        }
    }

    /// Fills u[first..n-1] from u(r_max) = 0, u(r_max - h) = tiny.
    void inward(double e, std::size_t first, std::vector<double>& u) const {
        u.assign(n_, 0.0);
        const double c = h_ * h_ / 12.0;
        u[n_ - 2] = 1e-30;
        for (std::size_t k = n_ - 2; k > first; --k) {
            const double next = (2.0 * u[k] * (1.0 - 5.0 * c * f(k, e)) - (1.0 + c * f(k + 1, e)) * u[k + 1]) /
                                (1.0 + c * f(k - 1, e));
            u[k - 1] = next;
            if (std::abs(next) > 1e150)
                for (std::size_t j = k - 1; j < n_; ++j) u[j] *= 1e-150;
        }
    }

    /// Outer classical turning point, clamped away from the grid ends.
    std::size_t match_index(double e) const {
        std::size_t m = 0;
        for (std::size_t k = 1; k < n_; ++k)
            if (f(k, e) > 0.0) m = k;
        if (m == 0) m = n_ / 2;
        return std::clamp<std::size_t>(m, 10, n_ - 10);
    }

    /// Jump of u'/u at the matching point between the two integrations.
    double mismatch(double e, std::size_t m, std::vector<double>& uo, std::vector<double>& ui) const {
        outward(e, m + 1, uo);
        inward(e, m - 1, ui);
        const double d_out = (uo[m + 1] - uo[m - 1]) / (2.0 * h_ * uo[m]);
        const double d_in = (ui[m + 1] - ui[m - 1]) / (2.0 * h_ * ui[m]);
        return d_out - d_in;
    }

  private:
    int l_;
    double mu_;
    double h_;
    std::size_t n_ = 0;
    std::vector<double> r_;
    std::vector<double> v_;  // effective potential incl. centrifugal term
    double origin_fu_ = 0.0;
};

RadialSolution solve_level(const Numerov& nv, int level, EnergyBracket bracket, const std::string& label) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    if (nv.nodes_outward(lo) > level || nv.nodes_outward(hi) <= level)
        throw RadialSolveError(level, "energy bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                          "] does not contain the level");
    // Bisection on the node count isolates the level.
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        (nv.nodes_outward(mid) > level ? hi : lo) = mid;
    }

    // Secant on the log-derivative mismatch, kept inside the bracket.
    std::vector<double> uo, ui;
    double e = 0.5 * (lo + hi);
    const std::size_t m = nv.match_index(e);
    double e0 = lo, e1 = hi;
    double g0 = nv.mismatch(e0, m, uo, ui);
    double g1 = nv.mismatch(e1, m, uo, ui);
    for (int it = 0; it < 60 && std::abs(e1 - e0) > 1e-14; ++it) {
        if (g1 == g0) break;
        const double e2 = e1 - g1 * (e1 - e0) / (g1 - g0);
        if (!(e2 > lo && e2 < hi)) break;
        e0 = e1;
        g0 = g1;
        e1 = e2;
        g1 = nv.mismatch(e1, m, uo, ui);
        e = e1;
    }

    // Join the two branches at the matching point and normalize.
    std::vector<double> u;
    nv.mismatch(e, m, uo, ui);
    u.assign(nv.size(), 0.0);
    const double scale = uo[m] / ui[m];
    for (std::size_t k = 0; k <= m; ++k) u[k] = uo[k];
    for (std::size_t k = m + 1; k < nv.size(); ++k) u[k] = ui[k] * scale;
    double norm = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k) norm += 0.5 * nv.h() * (u[k] * u[k] + u[k - 1] * u[k - 1]);
    if (!std::isfinite(norm) || norm <= 0.0) throw RadialSolveError(level, "solution is not normalizable");
    const double inv = 1.0 / std::sqrt(norm);
    for (double& x : u) x *= inv;

    RadialSolution sol;
    sol.r = nv.r();
    sol.u = std::move(u);
    sol.energy = e;
    sol.level = level;
    sol.channel = label;
    for (std::size_t k = 2; k < sol.u.size(); ++k)
        if ((sol.u[k] < 0.0) != (sol.u[k - 1] < 0.0) && std::abs(sol.u[k]) > 1e-10) ++sol.node_count;
    return sol;
}

}  // namespace

std::vector<RadialSolution> solve_radial(const std::function<double(double)>& central, int l, double mu,
                                         int n_levels, RadialGrid grid, EnergyBracket bracket, std::string label) {
    if (!(grid.h > 0.0)) throw std::invalid_argument("solve_radial: h must be positive");
    if (!(grid.r_max > 5.0)) throw std::invalid_argument("solve_radial: r_max must exceed 5 fm");
    if (n_levels < 1) throw std::invalid_argument("solve_radial: n_levels must be >= 1");
    if (l < 0 || l > 1) throw std::invalid_argument("solve_radial: only l = 0, 1 are supported");
    const Numerov nv(central, l, mu, grid);
    std::vector<RadialSolution> out;
    out.reserve(n_levels);
    for (int level = 0; level < n_levels; ++level) out.push_back(solve_level(nv, level, bracket, label));
    return out;
}

std::vector<RadialSolution> solve_radial(const Channel& ch, const ModelParams& params, int n_levels,
                                         RadialGrid grid, EnergyBracket bracket) {
    auto central = [&](double r) { return potential(r, params, ch); };
    return solve_radial(central, ch.l, params.mu, n_levels, grid, bracket, std::string(ch.label));
}

double grid_overlap(const RadialSolution& a, const RadialSolution& b, OverlapWeight weight) {
    if (a.r.size() != b.r.size() || a.r.size() < 2 || a.r.back() != b.r.back() || a.r[1] != b.r[1])
        throw std::invalid_argument("grid_overlap: solutions are on different grids");
    double acc = 0.0;
    auto term = [&](std::size_t k) { return a.u[k] * b.u[k] * (weight == OverlapWeight::R ? a.r[k] : 1.0); };
    for (std::size_t k = 1; k < a.r.size(); ++k) acc += 0.5 * (a.r[k] - a.r[k - 1]) * (term(k) + term(k - 1));
    return acc;
}

}  // namespace qcharm
