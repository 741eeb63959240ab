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
#include <initializer_list>
#include <limits>

namespace qcharm {

/// Identifies one random stream: a master seed folded with a path of task
/// indices (trial, step, term, ...). Two keys built from the same seed and
/// path are equal, independent of which thread builds them.
class StreamKey {
  public:
    explicit StreamKey(std::uint64_t master_seed);

    /// Child key for sub-task `index`.
    StreamKey child(std::uint64_t index) const;
    StreamKey child(std::initializer_list<std::uint64_t> path) const;

    std::uint64_t value() const { return key_; }
    friend bool operator==(const StreamKey&, const StreamKey&) = default;

  private:
    struct Raw {};
    StreamKey(Raw, std::uint64_t key) : key_(key) {}
    std::uint64_t key_;
};

/// Counter-based generator: output k is a SplitMix64 finalizer applied to
/// (key, k). Satisfies UniformRandomBitGenerator so it plugs into <random>.
class RngStream {
  public:
    using result_type = std::uint64_t;

    explicit RngStream(StreamKey key) : key_(key.value()) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace qcharm
