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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qcharm/pauli.hpp"
#include "qcharm/quarkmodel.hpp"
#include "qcharm/transitions.hpp"

namespace qcharm::cli {

inline constexpr std::string_view kToolName = "qvqite";
inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime failure, replay mismatch
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

enum class Source { Literal, Computed };

/// Channel Hamiltonian from the built-in reference matrices or the oscillator builder.
HamiltonianMatrix channel_hamiltonian(ChannelId id, Source source, double omega = 1.2, int dim = 4);
/// Dipole matrix with P-wave rows, literal or computed.
HamiltonianMatrix dipole_matrix(Source source, double omega = 1.2, int dim = 4);
/// Ansatz parameters of every eigenvector of the channel Hamiltonian, ascending energy.
std::vector<Theta> eigvec_thetas(ChannelId id, Source source, double omega = 1.2);

/// Runs one command line (args excludes the program name). Safe to call
/// repeatedly in one process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace qcharm::cli
