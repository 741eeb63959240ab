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

#include "qcharm/rng.hpp"

namespace qcharm {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

StreamKey::StreamKey(std::uint64_t master_seed) : key_(mix64(master_seed ^ 0x5851f42d4c957f2dULL)) {}

StreamKey StreamKey::child(std::uint64_t index) const {
    return StreamKey(Raw{}, mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

StreamKey StreamKey::child(std::initializer_list<std::uint64_t> path) const {
    StreamKey k = *this;
    for (auto i : path) k = k.child(i);
    return k;
}

RngStream::result_type RngStream::operator()() { return mix64(key_ + mix64(counter_++)); }

double RngStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

}  // namespace qcharm
