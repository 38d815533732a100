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

#include "mecplace/serialize.hpp"

#include <filesystem>

#include <gtest/gtest.h>

#include "mecplace/errors.hpp"
#include "mecplace/gen.hpp"

namespace mecplace {
namespace {

TEST(SerializeTest, InstanceRoundTrip) {
  GeneratorConfig cfg;
  cfg.request_count = 12;
  cfg.seed = 5;
  const ProblemInstance inst = generate(cfg);
  const ProblemInstance back = instance_from_json(parse_json(dump_json(instance_to_json(inst)), "t"));
  ASSERT_EQ(back.request_count(), inst.request_count());
  ASSERT_EQ(back.mec_count(), inst.mec_count());
  EXPECT_EQ(back.replicas, inst.replicas);
  for (std::size_t r = 0; r < inst.request_count(); ++r) {
    EXPECT_EQ(back.requests[r].demands(), inst.requests[r].demands());
    EXPECT_EQ(back.requests[r].reward, inst.requests[r].reward);
    EXPECT_EQ(back.requests[r].upf_chain, inst.requests[r].upf_chain);
  }
  // Text is canonical: a second round trip reproduces it byte for byte.
  EXPECT_EQ(dump_json(instance_to_json(back)), dump_json(instance_to_json(inst)));
}

TEST(SerializeTest, SolutionRoundTrip) {
  IntegralSolution sol = IntegralSolution::zeros(3, 2);
  sol.x(0, 1) = 1;
  sol.x(2, 0) = 1;
  sol.x(2, 1) = 1;
  sol.y[0] = 1;
  sol.y[2] = 1;
  EXPECT_EQ(solution_from_json(solution_to_json(sol)), sol);
}

TEST(SerializeTest, MissingReplicasAreRecomputed) {
  nlohmann::json doc = parse_json(R"({
    "version": 1,
    "failure_model": {"vnf_failure": 0.001, "pm_failure": 0.004},
    "mecs": [{"id": 0, "cpu": 4, "ram": 4, "uplink": 10, "downlink": 10}],
    "requests": [{"id": 0, "cpu": 2, "ram": 2, "uplink": 5, "downlink": 5,
                  "failure_threshold": 0.001, "reward": 7}]
  })", "inline");
  EXPECT_EQ(instance_from_json(doc).replicas, std::vector<int>{2});
}

TEST(SerializeTest, SyntaxErrorCarriesPosition) {
  try {
    parse_json("{\n  \"a\": 1,\n  oops\n}", "cfg");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(SerializeTest, SchemaErrorsAreParseErrors) {
  EXPECT_THROW(instance_from_json(parse_json(R"({"version": 1})", "t")), ParseError);
  EXPECT_THROW(instance_from_json(parse_json(R"({"version": 99})", "t")), ParseError);
  EXPECT_THROW(solution_from_json(parse_json(R"({"version": 1, "x": [[2]], "y": [1]})", "t")),
               ParseError);
  EXPECT_THROW(solution_from_json(parse_json(R"({"version": 1, "x": [[1, 0], [1]], "y": [1, 1]})", "t")),
               ParseError);
}

TEST(SerializeTest, FileErrorsAreIoErrors) {
  EXPECT_THROW(read_text_file("/nonexistent/dir/file.json"), IoError);
  EXPECT_THROW(write_text_file("/nonexistent/dir/file.json", "x"), IoError);
}

TEST(SerializeTest, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "mecplace_serialize_test.json";
  GeneratorConfig cfg;
  cfg.request_count = 4;
  const ProblemInstance inst = generate(cfg);
  write_instance(path, inst);
  EXPECT_EQ(read_instance(path).replicas, inst.replicas);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace mecplace
