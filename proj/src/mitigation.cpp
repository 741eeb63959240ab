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

#include "qcharm/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qcharm/parallel.hpp"

namespace qcharm {

CalibrationMatrix calibrate(int n_qubits, std::span<const int> measured, std::uint64_t shots, const NoiseModel& noise,
                            StreamKey key) {
    if (measured.empty()) throw std::invalid_argument("calibrate: no measured qubits");
    if (shots == 0) throw std::invalid_argument("calibrate: shots must be positive");
    const std::size_t m = measured.size();
    const std::size_t dim = std::size_t{1} << m;
    CalibrationMatrix cal{{measured.begin(), measured.end()}, RealMatrix(dim, dim), shots};
    for (std::size_t j = 0; j < dim; ++j) {
        Circuit prep(n_qubits);
        for (std::size_t k = 0; k < m; ++k)
            if ((j >> (m - 1 - k)) & 1U) prep.add(Gate::x(measured[k]));
        RngStream rng(key.child(j));
        const auto counts = sample_circuit(prep, {}, measured, shots, rng, &noise);
        for (std::size_t r = 0; r < dim; ++r) cal.m(r, j) = static_cast<double>(counts[r]) / static_cast<double>(shots);
    }
    return cal;
}

CalibrationMatrix calibrate(int m, std::uint64_t shots, const NoiseModel& noise, StreamKey key) {
    std::vector<int> measured(static_cast<std::size_t>(std::max(m, 0)));
    for (int q = 0; q < m; ++q) measured[static_cast<std::size_t>(q)] = q;
    return calibrate(m, measured, shots, noise, key);
}

std::vector<double> mitigate_distribution(std::span<const double> freq, const CalibrationMatrix& cal) {
    if (freq.size() != cal.m.rows()) throw std::invalid_argument("mitigate: distribution size does not match calibration");
    std::vector<double> x;
    try {
        x = lu_solve(cal.m, freq);
    } catch (const std::exception&) {
        throw std::runtime_error("mitigate: calibration matrix is singular");
    }
    double total = 0.0;
    for (double& v : x) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (!(total > 0.0)) throw std::runtime_error("mitigate: corrected distribution vanishes");
    for (double& v : x) v /= total;
    return x;
}

std::vector<double> mitigate_counts(const Histogram& raw, const CalibrationMatrix& cal) {
    std::uint64_t shots = 0;
    for (auto c : raw) shots += c;
    if (shots == 0) throw std::invalid_argument("mitigate: empty histogram");
    std::vector<double> freq(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) freq[i] = static_cast<double>(raw[i]) / static_cast<double>(shots);
    return mitigate_distribution(freq, cal);
}

void CalibratedCorrector::add(CalibrationMatrix cal) {
    auto k = cal.measured;
    cals_.insert_or_assign(std::move(k), std::move(cal));
}

bool CalibratedCorrector::has(std::span<const int> measured) const {
    return cals_.contains(std::vector<int>(measured.begin(), measured.end()));
}

std::vector<double> CalibratedCorrector::correct(const Histogram& counts, std::span<const int> measured) const {
    const auto it = cals_.find(std::vector<int>(measured.begin(), measured.end()));
    if (it == cals_.end()) throw std::invalid_argument("no readout calibration for this qubit set");
    return mitigate_counts(counts, it->second);
}

Circuit fold(const Circuit& c, int scale) {
    if (scale < 1 || scale % 2 == 0) throw std::invalid_argument("fold: scale must be a positive odd integer");
    Circuit out = c;
    const Circuit inv = c.inverse();
    for (int k = 0; k < (scale - 1) / 2; ++k) {
        out.append(inv);
        out.append(c);
    }
    return out;
}

void FoldingPlan::validate() const {
    if (scales.empty()) throw std::invalid_argument("zne: no scales");
    for (int s : scales)
        if (s < 1 || s % 2 == 0) throw std::invalid_argument("zne: scales must be positive odd integers");
    for (int o : orders)
        if (o < 1 || static_cast<std::size_t>(o) >= scales.size())
            throw std::invalid_argument("zne: each order needs more scales than order");
    if (trials < 1) throw std::invalid_argument("zne: trials must be >= 1");
    if (bootstrap < 2) throw std::invalid_argument("zne: bootstrap needs at least two resamples");
}

double zne_extrapolate(std::span<const double> scales, std::span<const double> values, int order) {
    if (scales.size() != values.size()) throw std::invalid_argument("zne: size mismatch");
    if (order < 0 || static_cast<std::size_t>(order) >= scales.size())
        throw std::invalid_argument("zne: too few scales for this order");
    return polyval(polyfit(scales, values, order), 0.0);
}

namespace {

double sample_std(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

double bootstrap_std(const std::vector<std::vector<double>>& samples,
                     const std::function<double(const std::vector<std::vector<double>>&)>& refit, int b,
                     StreamKey key) {
    if (b < 2) throw std::invalid_argument("bootstrap: needs at least two resamples");
    std::vector<double> stats(static_cast<std::size_t>(b));
    std::vector<std::vector<double>> draw(samples.size());
    for (int r = 0; r < b; ++r) {
        RngStream rng(key.child(static_cast<std::uint64_t>(r)));
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const auto& src = samples[s];
            if (src.empty()) throw std::invalid_argument("bootstrap: empty sample");
            std::uniform_int_distribution<std::size_t> pick(0, src.size() - 1);
            draw[s].resize(src.size());
            for (auto& v : draw[s]) v = src[pick(rng)];
        }
        stats[static_cast<std::size_t>(r)] = refit(draw);
    }
    return sample_std(stats);
}

ZneResult zne(const std::function<ShotData(int scale, int trial)>& evaluate, const FoldingPlan& plan, StreamKey key,
              int jobs) {
    plan.validate();
    const std::size_t ns = plan.scales.size();
    const std::size_t nt = static_cast<std::size_t>(plan.trials);
    ZneResult out;
    out.points.resize(ns);
    std::vector<ShotData> grid(ns * nt);
    parallel_for(ns * nt, jobs, [&](std::size_t idx) {
        grid[idx] = evaluate(plan.scales[idx / nt], static_cast<int>(idx % nt));
        if (grid[idx].shots == 0) throw std::invalid_argument("zne: evaluator returned no shots");
    });

    std::vector<double> xs(ns), means(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        auto& pt = out.points[s];
        pt.scale = plan.scales[s];
        pt.trials.assign(grid.begin() + static_cast<std::ptrdiff_t>(s * nt),
                         grid.begin() + static_cast<std::ptrdiff_t>((s + 1) * nt));
        std::vector<double> vals;
        for (const auto& t : pt.trials) vals.push_back(t.value());
        for (double v : vals) pt.mean += v;
        pt.mean /= static_cast<double>(nt);
        pt.error = nt > 1 ? sample_std(vals) / std::sqrt(static_cast<double>(nt)) : 0.0;
        xs[s] = pt.scale;
        means[s] = pt.mean;
    }

    for (std::size_t oi = 0; oi < plan.orders.size(); ++oi) {
        const int order = plan.orders[oi];
        Extrapolation ex;
        ex.order = order;
        ex.value = zne_extrapolate(xs, means, order);
        ex.physical = !plan.probability_valued || (ex.value >= 0.0 && ex.value <= 1.0);
        // Binomial redraw of each trial: k* ~ Bin(n, k / n).
        std::vector<double> stats(static_cast<std::size_t>(plan.bootstrap));
        std::vector<double> boot_means(ns);
        for (int r = 0; r < plan.bootstrap; ++r) {
            RngStream rng(key.child({static_cast<std::uint64_t>(oi), static_cast<std::uint64_t>(r)}));
            for (std::size_t s = 0; s < ns; ++s) {
                double m = 0.0;
                for (const auto& t : out.points[s].trials) {
                    const double p = static_cast<double>(t.successes) / static_cast<double>(t.shots);
                    std::binomial_distribution<std::uint64_t> bin(t.shots, p);
                    ShotData d = t;
                    d.successes = bin(rng);
                    m += d.value();
                }
                boot_means[s] = m / static_cast<double>(nt);
            }
            stats[static_cast<std::size_t>(r)] = zne_extrapolate(xs, boot_means, order);
        }
        ex.bootstrap_std = sample_std(stats);
        out.fits.push_back(ex);
    }
    return out;
}

ShotData sample_outcome(const Circuit& c, std::span<const int> measured, std::uint64_t outcome, std::uint64_t shots,
                        const NoiseModel* noise, StreamKey key) {
    if (outcome >= (std::uint64_t{1} << measured.size())) throw std::invalid_argument("sample_outcome: outcome out of range");
    RngStream rng(key);
    const auto counts = sample_circuit(c, {}, measured, shots, rng, noise);
    ShotData d;
    d.successes = counts[outcome];
    d.shots = shots;
    return d;
}

}  // namespace qcharm
