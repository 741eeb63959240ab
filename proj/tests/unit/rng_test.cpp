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
#include <set>

#include "qcharm/rng.hpp"

using namespace qcharm;

TEST(StreamKey, SamePathSameStream) {
    const StreamKey a = StreamKey(42).child({3, 1, 4});
    const StreamKey b = StreamKey(42).child(3).child(1).child(4);
    EXPECT_EQ(a, b);
    RngStream ra(a), rb(b);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(ra(), rb());
}

TEST(StreamKey, DistinctChildrenDiffer) {
    std::set<std::uint64_t> seen;
    const StreamKey root(7);
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(root.child(i).value());
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(StreamKey(1).child(2), StreamKey(2).child(1));
}

TEST(RngStream, UniformMomentsAndRange) {
    RngStream r(StreamKey(9));
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(RngStream, BitBalance) {
    RngStream r(StreamKey(123));
    int ones[64] = {};
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const auto v = r();
        for (int b = 0; b < 64; ++b) ones[b] += static_cast<int>((v >> b) & 1U);
    }
    for (int b = 0; b < 64; ++b) EXPECT_NEAR(ones[b], n / 2, 5 * std::sqrt(n / 4.0));
}
