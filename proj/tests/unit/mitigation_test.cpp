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

#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "qcharm/mitigation.hpp"

using namespace qcharm;

namespace {

// Independent-bit confusion matrix for m qubits: C(r, j) = prod_k P(r_k | j_k).
RealMatrix forward_confusion(const std::vector<ReadoutError>& ro) {
    const std::size_t m = ro.size(), dim = std::size_t{1} << m;
    RealMatrix c(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t j = 0; j < dim; ++j) {
            double p = 1.0;
            for (std::size_t k = 0; k < m; ++k) {
                const int rb = static_cast<int>((r >> (m - 1 - k)) & 1U), jb = static_cast<int>((j >> (m - 1 - k)) & 1U);
                const double flip = jb ? ro[k].p01 : ro[k].p10;
                p *= rb == jb ? 1 - flip : flip;
            }
            c(r, j) = p;
        }
    return c;
}

}  // namespace

TEST(Calibrate, ZeroNoiseIsIdentity) {
    const std::uint64_t shots = 4000;
    const auto cal = calibrate(2, shots, NoiseModel{}, StreamKey(1));
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(cal.m(r, j), r == j ? 1.0 : 0.0, 5.0 / std::sqrt(shots));
}

TEST(Calibrate, DefaultReadoutColumns) {
    const std::uint64_t shots = 200000;
    const auto nm = NoiseModel::default_readout();
    const auto cal = calibrate(2, shots, nm, StreamKey(2));
    const auto want = forward_confusion({nm.readout_for(0), nm.readout_for(1)});
    EXPECT_NEAR(want(0, 0), 0.9604, 1e-12);
    for (std::size_t j = 0; j < 4; ++j) {
        double col = 0;
        for (std::size_t r = 0; r < 4; ++r) {
            col += cal.m(r, j);
            EXPECT_NEAR(cal.m(r, j), want(r, j), 5 * std::sqrt(want(r, j) * (1 - want(r, j)) / shots) + 1e-9);
        }
        EXPECT_NEAR(col, 1.0, 1e-12);
    }
}

TEST(Mitigate, IdentityCalibrationReturnsFrequencies) {
    CalibrationMatrix cal{{0, 1}, RealMatrix::identity(4), 1000};
    const Histogram raw{100, 300, 500, 100};
    const auto x = mitigate_counts(raw, cal);
    EXPECT_NEAR(x[1], 0.3, 1e-15);
    EXPECT_NEAR(x[2], 0.5, 1e-15);
}

TEST(Mitigate, InvertsForwardNoise) {
    gen::Gen g(41);
    const std::vector<ReadoutError> ro{{0.02, 0.03}, {0.05, 0.01}};
    CalibrationMatrix cal{{0, 1}, forward_confusion(ro), 0};
    for (int trial = 0; trial < 10; ++trial) {
        const auto truth = g.distribution(4);
        const auto noisy = matvec(cal.m, truth);
        const auto x = mitigate_distribution(noisy, cal);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(x[i], truth[i], 1e-12);
    }
}

TEST(Mitigate, MillionShotRecovery) {
    gen::Gen g(42);
    const auto nm = NoiseModel::default_readout();
    const std::vector<ReadoutError> ro{nm.readout_for(0), nm.readout_for(1)};
    CalibrationMatrix cal{{0, 1}, forward_confusion(ro), 0};
    const auto truth = g.distribution(4);
    RngStream rng(StreamKey(5));
    const int measured[] = {0, 1};
    const auto counts = apply_readout(sample_multinomial(truth, 1000000, rng), measured, nm, rng);
    const auto x = mitigate_counts(counts, cal);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(x[i], truth[i], 2e-3);
}

TEST(Mitigate, ClipsAndRenormalizes) {
    const std::vector<ReadoutError> ro{{0.1, 0.1}};
    CalibrationMatrix cal{{0}, forward_confusion(ro), 0};
    // Outside the image of the confusion matrix: solving gives a negative entry.
    const auto x = mitigate_distribution(std::vector<double>{1.0, 0.0}, cal);
    EXPECT_GE(x[1], 0.0);
    EXPECT_NEAR(x[0] + x[1], 1.0, 1e-15);
    for (double v : x) EXPECT_LE(v, 1.0);
}

TEST(Mitigate, SingularCalibrationThrows) {
    CalibrationMatrix cal{{0}, RealMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}), 0};
    EXPECT_THROW(mitigate_distribution(std::vector<double>{0.5, 0.5}, cal), std::runtime_error);
    EXPECT_THROW(mitigate_distribution(std::vector<double>{0.5, 0.3, 0.2}, CalibrationMatrix{{0}, RealMatrix::identity(2), 0}),
                 std::invalid_argument);
}

TEST(Corrector, LooksUpByMeasuredSet) {
    CalibratedCorrector corr;
    corr.add(CalibrationMatrix{{0}, RealMatrix::identity(2), 10});
    const int q0[] = {0}, q1[] = {1};
    EXPECT_TRUE(corr.has(q0));
    EXPECT_FALSE(corr.has(q1));
    EXPECT_THROW(corr.correct(Histogram{1, 1}, q1), std::invalid_argument);
    EXPECT_NEAR(corr.correct(Histogram{3, 1}, q0)[0], 0.75, 1e-15);
}

TEST(Fold, GateCountsAndUnitarity) {
    const Circuit u = overlap_circuit(std::vector<double>{0.3, -0.6, 1.2}, std::vector<double>{0.9, 0.1, -0.4});
    EXPECT_EQ(fold(u, 1).size(), u.size());
    EXPECT_EQ(fold(u, 3).size(), 3 * u.size());
    EXPECT_EQ(fold(u, 5).size(), 5 * u.size());
    const auto a = run(u), b = run(fold(u, 3));
    for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-10);
    EXPECT_THROW(fold(u, 2), std::invalid_argument);
    EXPECT_THROW(fold(u, 0), std::invalid_argument);
}

TEST(Extrapolate, ExactFits) {
    const std::vector<double> xs{1, 3, 5};
    EXPECT_NEAR(zne_extrapolate(xs, std::vector<double>{0.9, 0.7, 0.5}, 1), 1.0, 1e-10);
    auto f = [](double x) { return 0.8 - 0.03 * x + 0.002 * x * x; };
    EXPECT_NEAR(zne_extrapolate(xs, std::vector<double>{f(1), f(3), f(5)}, 2), 0.8, 1e-10);
    const std::vector<double> flat{0.42, 0.42, 0.42};
    EXPECT_NEAR(zne_extrapolate(xs, flat, 1), 0.42, 1e-12);
    EXPECT_NEAR(zne_extrapolate(xs, flat, 2), 0.42, 1e-12);
    EXPECT_THROW(zne_extrapolate(xs, flat, 3), std::invalid_argument);
}

TEST(Bootstrap, ZeroVarianceGivesZero) {
    const std::vector<std::vector<double>> samples{{0.9, 0.9, 0.9}, {0.7, 0.7, 0.7}, {0.5, 0.5, 0.5}};
    const std::vector<double> xs{1, 3, 5};
    auto refit = [&](const std::vector<std::vector<double>>& s) {
        std::vector<double> means;
        for (const auto& v : s) {
            double m = 0;
            for (double x : v) m += x;
            means.push_back(m / static_cast<double>(v.size()));
        }
        return zne_extrapolate(xs, means, 1);
    };
    EXPECT_NEAR(bootstrap_std(samples, refit, 100, StreamKey(1)), 0.0, 1e-12);
}

TEST(Bootstrap, StableAndMatchesAnalyticIntercept) {
    gen::Gen g(43);
    const std::vector<double> xs{1, 3, 5, 7};
    const double sigma = 0.05;
    const int per_scale = 40;
    std::vector<std::vector<double>> samples(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s)
        for (int k = 0; k < per_scale; ++k) samples[s].push_back(1.0 - 0.05 * xs[s] + sigma * g.normal());
    auto refit = [&](const std::vector<std::vector<double>>& s) {
        std::vector<double> means;
        for (const auto& v : s) {
            double m = 0;
            for (double x : v) m += x;
            means.push_back(m / static_cast<double>(v.size()));
        }
        return zne_extrapolate(xs, means, 1);
    };
    const double b200 = bootstrap_std(samples, refit, 200, StreamKey(2));
    const double b400 = bootstrap_std(samples, refit, 400, StreamKey(3));
    EXPECT_LT(std::abs(b200 - b400) / b400, 0.2);
    // Equal weights: var(intercept) = s^2 (1/N + xbar^2 / Sxx), s^2 = sigma^2 / per_scale.
    double xbar = 0, sxx = 0;
    for (double x : xs) xbar += x / 4;
    for (double x : xs) sxx += (x - xbar) * (x - xbar);
    const double analytic = std::sqrt(sigma * sigma / per_scale * (1.0 / 4 + xbar * xbar / sxx));
    EXPECT_GT(b200, analytic / 2);
    EXPECT_LT(b200, analytic * 2);
}

TEST(Zne, FlatSeriesAndBinomialBootstrap) {
    FoldingPlan plan;
    plan.trials = 4;
    auto flat = [](int, int) { return ShotData{6000, 10000}; };
    const auto r = zne(flat, plan, StreamKey(1));
    ASSERT_EQ(r.points.size(), 4u);
    ASSERT_EQ(r.fits.size(), 2u);
    for (const auto& f : r.fits) {
        EXPECT_NEAR(f.value, 0.6, 1e-10);
        EXPECT_TRUE(f.physical);
        // Redrawing 4 trials x 10000 shots per scale: intercept spread of order
        // sqrt(p(1-p)/40000) times the fit's leverage.
        EXPECT_GT(f.bootstrap_std, 0.0);
        EXPECT_LT(f.bootstrap_std, 0.02);
    }
}

TEST(Zne, FlagsUnphysicalExtrapolations) {
    FoldingPlan plan;
    plan.trials = 1;
    plan.orders = {1};
    // Rising with scale: the intercept falls below zero.
    auto rising = [](int scale, int) { return ShotData{static_cast<std::uint64_t>(1000 * scale), 10000}; };
    const auto r = zne(rising, plan, StreamKey(2));
    EXPECT_LT(r.fits[0].value, 0.0);
    EXPECT_FALSE(r.fits[0].physical);
}

TEST(Zne, PlanValidationAndJobInvariance) {
    FoldingPlan bad;
    bad.scales = {1, 2, 3};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    FoldingPlan few;
    few.scales = {1, 3};
    few.orders = {2};
    EXPECT_THROW(few.validate(), std::invalid_argument);

    FoldingPlan plan;
    plan.trials = 3;
    const auto nm = NoiseModel::default_depolarizing();
    const Circuit u = overlap_circuit(std::vector<double>{0.3, -0.6, 1.2}, std::vector<double>{0.35, -0.5, 1.1});
    const int measured[] = {0, 1};
    auto eval = [&](int scale, int trial) {
        return sample_outcome(fold(u, scale), measured, 0, 4000, &nm,
                              StreamKey(9).child({static_cast<std::uint64_t>(scale), static_cast<std::uint64_t>(trial)}));
    };
    const auto a = zne(eval, plan, StreamKey(4), 1);
    const auto b = zne(eval, plan, StreamKey(4), 3);
    for (std::size_t i = 0; i < a.fits.size(); ++i) {
        EXPECT_EQ(a.fits[i].value, b.fits[i].value);
        EXPECT_EQ(a.fits[i].bootstrap_std, b.fits[i].bootstrap_std);
    }
    // Noise pulls P(00) down as the scale grows.
    EXPECT_GT(a.points.front().mean, a.points.back().mean);
}
