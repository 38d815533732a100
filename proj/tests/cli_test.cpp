// Copyright 2026 The mecplace Authors.
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

#include "cli.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mecplace/serialize.hpp"

namespace mecplace::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mecplace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mecplace_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string WriteFile(const std::string& name, const std::string& text) const {
    write_text_file(dir_ / name, text);
    return Path(name);
  }

  std::string SingleFit() const {
    return WriteFile("single.json", R"({
      "version": 1,
      "failure_model": {"vnf_failure": 0.001, "pm_failure": 0.004},
      "mecs": [{"id": 0, "cpu": 4, "ram": 4, "uplink": 10, "downlink": 10}],
      "requests": [{"id": 0, "cpu": 2, "ram": 2, "uplink": 5, "downlink": 5,
                    "failure_threshold": 0.01, "reward": 7}]
    })");
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateDefaultConfig) {
  const Outcome o = Invoke({"generate", "--seed", "3", "-o", Path("a.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("mecs: 10"), std::string::npos);
  EXPECT_NE(o.out.find("requests: 50"), std::string::npos);
  const ProblemInstance inst = read_instance(Path("a.json"));
  EXPECT_EQ(inst.mec_count(), 10u);
  EXPECT_EQ(inst.mecs[0].uplink_capacity, 75);
  EXPECT_EQ(inst.mecs[0].downlink_capacity, 250);

  ASSERT_EQ(Invoke({"generate", "--seed", "3", "-o", Path("b.json")}).code, kExitOk);
  EXPECT_EQ(read_text_file(Path("a.json")), read_text_file(Path("b.json")));
}

TEST_F(CliTest, GenerateWithoutSeedPrintsOne) {
  const Outcome o = Invoke({"generate", "-o", Path("a.json")});
  ASSERT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("--seed"), std::string::npos);
}

TEST_F(CliTest, GenerateMalformedConfig) {
  const std::string cfg = WriteFile("bad.json", "{\n  \"version\": 1,\n  \"mec_count\": ,\n}\n");
  const Outcome o = Invoke({"generate", "--config", cfg, "--seed", "1", "-o", Path("a.json")});
  EXPECT_EQ(o.code, kExitParse);
  EXPECT_NE(o.err.find("bad.json:3:"), std::string::npos) << o.err;
}

TEST_F(CliTest, GenerateFromConfig) {
  const std::string cfg =
      WriteFile("cfg.json", R"({"version": 1, "mec_count": 4, "request_count": 9, "seed": 5})");
  const Outcome o = Invoke({"generate", "--config", cfg, "-o", Path("a.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("seed: 5"), std::string::npos);
  EXPECT_EQ(read_instance(Path("a.json")).request_count(), 9u);
}

TEST_F(CliTest, SolveSchemes) {
  const std::string inst = SingleFit();
  Outcome o = Invoke({"solve", "-i", inst, "--scheme", "lr"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("objective: 7\n"), std::string::npos) << o.out;

  o = Invoke({"solve", "-i", inst, "--scheme", "rr", "--seed", "1"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("bounds:"), std::string::npos);

  ASSERT_EQ(Invoke({"generate", "--seed", "4", "-o", Path("g.json")}).code, kExitOk);
  o = Invoke({"solve", "-i", Path("g.json"), "--scheme", "greedy", "--seed", "2", "-o",
           Path("sol.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("feasible: true"), std::string::npos);
  EXPECT_NO_THROW(read_solution(Path("sol.json")));

  o = Invoke({"solve", "-i", Path("g.json"), "--scheme", "wo-avl", "--seed", "2"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("feasible: true"), std::string::npos);

  o = Invoke({"solve", "-i", inst, "--scheme", "exact"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("objective: 7\n"), std::string::npos);
}

TEST_F(CliTest, SolveErrors) {
  ASSERT_EQ(Invoke({"generate", "--seed", "4", "-o", Path("g.json")}).code, kExitOk);
  EXPECT_EQ(Invoke({"solve", "-i", Path("g.json"), "--scheme", "exact", "--max-nodes", "10"}).code,
            kExitLimit);
  EXPECT_EQ(Invoke({"solve", "-i", Path("g.json"), "--scheme", "simplex"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"solve", "-i", Path("missing.json"), "--scheme", "lr"}).code, kExitIo);
  EXPECT_EQ(Invoke({"solve", "-i", WriteFile("x.json", "[1,2"), "--scheme", "lr"}).code, kExitParse);
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, ExperimentWritesReproducibleCsvs) {
  const std::string cfg = WriteFile(
      "exp.json", R"({"version": 1, "request_counts": [15, 25], "runs": 3, "base_seed": 11})");
  Outcome o = Invoke({"experiment", "--config", cfg, "-o", Path("out1/deep")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  o = Invoke({"experiment", "--config", cfg, "-o", Path("out2"), "--jobs", "2"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  for (const char* name : {"summary.csv", "runs.csv", "bounds.csv"}) {
    EXPECT_EQ(read_text_file(Path("out1/deep/") + name), read_text_file(Path("out2/") + name));
  }
  const std::string summary = read_text_file(Path("out2/summary.csv"));
  for (const char* scheme : {",lr,", ",rr,", ",greedy,", ",wo-avl,"}) {
    EXPECT_NE(summary.find(scheme), std::string::npos) << scheme;
  }
  EXPECT_EQ(Invoke({"experiment", "--config", cfg, "-o", "/proc/mecplace/none"}).code, kExitIo);
}

TEST_F(CliTest, AvailsimPassThrough) {
  ASSERT_EQ(Invoke({"generate", "--seed", "4", "-o", Path("g.json")}).code, kExitOk);
  ASSERT_EQ(Invoke({"solve", "-i", Path("g.json"), "--scheme", "greedy", "--seed", "2", "-o",
                 Path("sol.json")}).code,
            kExitOk);
  const Outcome o = Invoke({"availsim", "-i", Path("g.json"), "-s", Path("sol.json"), "--trials",
                         "2000", "--seed", "1", "-o", Path("av.csv")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("packet_delivery_ratio"), std::string::npos);
  const std::string csv = read_text_file(Path("av.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
  EXPECT_EQ(Invoke({"availsim", "-i", Path("g.json"), "-s", Path("sol.json"), "--trials", "10"}).code,
            kExitUsage);
}

}  // namespace
}  // namespace mecplace::cli
