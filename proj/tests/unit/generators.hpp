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

// Small hand-rolled generators for property tests. They draw from
// std::mt19937_64 so the oracles never share a code path with qcharm's own
// random streams.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qcharm/linalg.hpp"

namespace gen {

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>()(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::vector<double> angles(std::size_t n, double span = 3.14159) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(-span, span);
        return v;
    }

    std::vector<double> unit_vector(std::size_t n) {
        std::vector<double> v(n);
        double norm = 0.0;
        for (auto& x : v) {
            x = normal();
            norm += x * x;
        }
        for (auto& x : v) x /= std::sqrt(norm);
        return v;
    }

    qcharm::ComplexMatrix complex_matrix(std::size_t n) {
        qcharm::ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = {normal(), normal()};
        return m;
    }

    qcharm::ComplexMatrix hermitian(std::size_t n) {
        auto a = complex_matrix(n);
        auto h = a + qcharm::adjoint(a);
        return h * qcharm::cplx(0.5);
    }

    qcharm::RealMatrix symmetric(std::size_t n) {
        qcharm::RealMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = normal();
        return m;
    }

    std::vector<double> distribution(std::size_t n) {
        std::vector<double> p(n);
        double total = 0.0;
        for (auto& x : p) total += (x = uniform(0.05, 1.0));
        for (auto& x : p) x /= total;
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

}  // namespace gen
