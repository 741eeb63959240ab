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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "qcharm/cli.hpp"
#include "qcharm/io.hpp"

using namespace qcharm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qcharm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& sub = "") const { return (dir_ / sub).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(Cli, DiagWritesLevels) {
    const auto r = call({"model", "diag", "--channel", "3S1", "--source", "literal", "--out", path()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto csv = io::read_file(path("diag_3S1_literal.csv"));
    EXPECT_NE(csv.find("0.752763865"), std::string::npos) << csv;
    EXPECT_TRUE(fs::exists(path("manifest_model_diag.json")));
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(call({"model", "diag", "--channel", "2D1", "--out", path()}).code, cli::kExitUsage);
    EXPECT_EQ(call({"amp", "e1", "--method", "swap", "--out", path()}).code, cli::kExitUsage);
    EXPECT_EQ(call({"model", "diag", "--source", "literal", "--omega", "1.0", "--out", path()}).code, cli::kExitUsage);
    EXPECT_EQ(call({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(call({"vqite", "--channel", "1S0", "--states", "5", "--out", path()}).code, cli::kExitUsage);
}

TEST_F(Cli, MalformedInputReportsLine) {
    io::write_file(path("bad.json"), "{\n\"dim\": 4,\n oops\n}\n");
    const auto r = call({"pauli", "--input", path("bad.json"), "--out", path()});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(Cli, NonConvergenceExitCode) {
    const auto r = call({"vqite", "--channel", "1S0", "--max-steps", "3", "--out", path()});
    EXPECT_EQ(r.code, cli::kExitNoConvergence);
    EXPECT_TRUE(fs::exists(path("summary_1S0.json")));
}

TEST_F(Cli, PauliTableAndRoundTrip) {
    const auto r = call({"pauli", "--dipole", "--source", "literal", "--roundtrip", "--out", path()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto j = io::read_json(path("pauli_dipole_literal.json"));
    EXPECT_EQ(j.at("n").get<int>(), 2);
    EXPECT_NE(r.out.find("roundtrip"), std::string::npos);
}

TEST_F(Cli, ReplayIsIdenticalAcrossJobs) {
    const auto r = call({"amp", "m1", "--method", "direct", "--mode", "sampled", "--shots", "2000", "--trials", "4",
                         "--seed", "11", "--jobs", "1", "--out", path("a")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto manifest = path("a/manifest_amp_m1.json");
    const auto rep = call({"replay", manifest, "--jobs", "4", "--out", path("b")});
    EXPECT_EQ(rep.code, cli::kExitOk) << rep.out << rep.err;
    EXPECT_EQ(io::read_file(path("a/amp_m1_direct_sampled.csv")), io::read_file(path("b/amp_m1_direct_sampled.csv")));
}

TEST_F(Cli, ReplayDetectsTampering) {
    ASSERT_EQ(call({"model", "diag", "--channel", "1S0", "--source", "literal", "--out", path("a")}).code, cli::kExitOk);
    auto m = io::read_json(path("a/manifest_model_diag.json"));
    for (auto& o : m.at("outputs")) o["fnv1a"] = "0000000000000000";
    io::write_file(path("a/manifest_model_diag.json"), io::dump(m));
    const auto rep = call({"replay", path("a/manifest_model_diag.json"), "--out", path("b")});
    EXPECT_EQ(rep.code, cli::kExitFailure);
    EXPECT_NE(rep.out.find("DIFFERS"), std::string::npos) << rep.out;
}

TEST_F(Cli, SeedFallsBackToEnvironment) {
    const std::vector<std::string> base{"amp", "m1", "--method", "direct", "--mode", "sampled", "--shots", "500"};
    auto with_seed = base;
    with_seed.insert(with_seed.end(), {"--seed", "29", "--out", path("a")});
    auto without = base;
    without.insert(without.end(), {"--out", path("b")});
    ASSERT_EQ(call(with_seed).code, cli::kExitOk);
    ::setenv("QVQITE_SEED", "29", 1);
    const auto r = call(without);
    ::unsetenv("QVQITE_SEED");
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(io::read_file(path("a/amp_m1_direct_sampled.csv")), io::read_file(path("b/amp_m1_direct_sampled.csv")));
    EXPECT_EQ(io::read_json(path("b/manifest_amp_m1.json")).at("seed").get<std::uint64_t>(), 29u);
}
