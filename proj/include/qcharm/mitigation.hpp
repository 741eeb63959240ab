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
#include <map>
#include <span>
#include <vector>

#include "qcharm/linalg.hpp"
#include "qcharm/rng.hpp"
#include "qcharm/simulator.hpp"

namespace qcharm {

// ---- Readout calibration ------------------------------------------------------

struct CalibrationMatrix {
    std::vector<int> measured;  // physical qubits, measured[0] most significant
    RealMatrix m;               // m(r, j) = P(read r | prepared j)
    std::uint64_t shots = 0;
};

/// Prepares each basis state of the measured qubits with X gates on an
/// n_qubits register and records the measured frequencies as columns.
CalibrationMatrix calibrate(int n_qubits, std::span<const int> measured, std::uint64_t shots, const NoiseModel& noise,
                            StreamKey key);
/// Qubits 0..m-1 of an m-qubit register.
CalibrationMatrix calibrate(int m, std::uint64_t shots, const NoiseModel& noise, StreamKey key);

/// Solves cal x = freq, clips negative entries to zero and renormalizes.
/// Throws std::runtime_error for a singular calibration.
std::vector<double> mitigate_distribution(std::span<const double> freq, const CalibrationMatrix& cal);
std::vector<double> mitigate_counts(const Histogram& raw, const CalibrationMatrix& cal);

/// Readout corrector backed by one calibration per measured-qubit set.
class CalibratedCorrector : public ReadoutCorrector {
  public:
    void add(CalibrationMatrix cal);
    bool has(std::span<const int> measured) const;
    /// Throws std::invalid_argument when no calibration matches `measured`.
    std::vector<double> correct(const Histogram& counts, std::span<const int> measured) const override;

  private:
    std::map<std::vector<int>, CalibrationMatrix> cals_;
};

// ---- Zero-noise extrapolation -------------------------------------------------

/// U (U^dagger U)^((scale - 1) / 2). Throws std::invalid_argument for even or
/// non-positive scales.
Circuit fold(const Circuit& c, int scale);

struct FoldingPlan {
    std::vector<int> scales{1, 3, 5, 7};
    std::vector<int> orders{1, 2};
    int trials = 10;
    int bootstrap = 200;
    bool probability_valued = true;  // flag extrapolations outside [0, 1]

    void validate() const;
};

/// Bernoulli shot record: `successes` out of `shots`, reported as a * p + b.
struct ShotData {
    std::uint64_t successes = 0;
    std::uint64_t shots = 0;
    double a = 1.0;
    double b = 0.0;

    double value() const { return a * static_cast<double>(successes) / static_cast<double>(shots) + b; }
};

struct ScalePoint {
    int scale = 1;
    double mean = 0.0;
    double error = 0.0;  // standard error over trials
    std::vector<ShotData> trials;
};

struct Extrapolation {
    int order = 1;
    double value = 0.0;
    double bootstrap_std = 0.0;
    bool physical = true;
};

struct ZneResult {
    std::vector<ScalePoint> points;
    std::vector<Extrapolation> fits;
};

/// Least-squares polynomial in the scale, evaluated at scale 0.
double zne_extrapolate(std::span<const double> scales, std::span<const double> values, int order);

/// Standard deviation of refit(resampled per-scale samples) over B
/// resamples-with-replacement drawn within each scale.
double bootstrap_std(const std::vector<std::vector<double>>& samples,
                     const std::function<double(const std::vector<std::vector<double>>&)>& refit, int b,
                     StreamKey key);

/// Evaluates the observable at each scale and trial, fits every order and
/// bootstraps each fit by redrawing each trial's shots (binomially, which is
/// the same as resampling its individual Bernoulli outcomes).
ZneResult zne(const std::function<ShotData(int scale, int trial)>& evaluate, const FoldingPlan& plan, StreamKey key,
              int jobs = 1);

/// Successes = shots reading `outcome` on `measured`, from noisy trajectories of c.
ShotData sample_outcome(const Circuit& c, std::span<const int> measured, std::uint64_t outcome, std::uint64_t shots,
                        const NoiseModel* noise, StreamKey key);

}  // namespace qcharm
