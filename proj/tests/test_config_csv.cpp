// Copyright 2026 The distest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "distest/config.hpp"
#include "distest/csv.hpp"
#include "doctest.h"

namespace distest {
namespace {

TEST_CASE("config parsing requires a command and rejects unknown keys") {
  CHECK_THROWS(ExperimentConfig::from_json_text("{}"));
  CHECK_THROWS(
      ExperimentConfig::from_json_text(R"({"command":"risk","bogus":1})"));
  // The risk command needs a positive separation.
  CHECK_THROWS(ExperimentConfig::from_json_text(R"({"command":"risk"})"));
  CHECK_NOTHROW(
      ExperimentConfig::from_json_text(R"({"command":"risk","rho":0.3})"));
}

TEST_CASE("config validation catches bad enumerations") {
  ExperimentConfig cfg =
      ExperimentConfig::from_json_text(R"({"command":"risk","rho":0.3})");
  cfg.model = "poisson";
  CHECK_THROWS(cfg.validate());
  cfg.model = "multinomial";
  cfg.panel_construction = "qmc";
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("canonical JSON and hash are stable across key order") {
  const auto a = ExperimentConfig::from_json_text(
      R"({"command":"risk","rho":0.3,"m":4,"n":32})");
  const auto b = ExperimentConfig::from_json_text(
      R"({"n":32,"command":"risk","rho":0.3,"m":4})");
  CHECK(a.to_json() == b.to_json());
  CHECK(a.hash() == b.hash());
  const auto c = ExperimentConfig::from_json_text(
      R"({"command":"risk","rho":0.3,"m":8,"n":32})");
  CHECK(a.hash() != c.hash());
  // Execution-environment knobs do not change the experiment identity.
  const auto d = ExperimentConfig::from_json_text(
      R"({"command":"risk","rho":0.3,"m":4,"n":32,"jobs":8,
          "out_path":"elsewhere.csv"})");
  CHECK(a.hash() == d.hash());
}

TEST_CASE("spec_from_config maps names onto protocol enums") {
  auto cfg = ExperimentConfig::from_json_text(
      R"({"command":"risk","rho":0.3,
          "model":"gaussian","constraint":"bandwidth",
          "randomness":"shared","aggregator":"sum_of_bits",
          "m":4,"n":16,"d":8,"b":2})");
  const ProtocolSpec spec = spec_from_config(cfg);
  CHECK(spec.model == ModelKind::gaussian);
  CHECK(spec.constraint == ConstraintKind::bandwidth);
  CHECK(spec.aggregator == AggregatorKind::sum_of_bits);
  CHECK(spec.b == 2);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("csv writer formats doubles with round-trip precision") {
  CHECK(CsvWriter::fmt(0.1) == "0.10000000000000001");
  CHECK(CsvWriter::fmt(1.0) == "1");
  CHECK(CsvWriter::fmt(std::uint64_t{42}) == "42");
}

TEST_CASE("csv writer enforces layout invariants") {
  CsvWriter w;
  w.metadata("schema_version", kCsvSchemaVersion);
  w.header({"a", "b"});
  w.row({"1", "2"});
  const std::string out = w.str();
  CHECK(out.rfind("# schema_version", 0) == 0);
  CHECK(out.find("a,b\n1,2\n") != std::string::npos);
  CHECK_THROWS(w.row({"only-one-cell"}));
  CHECK_THROWS(w.metadata("too", "late"));
}

TEST_CASE("identical configs give identical csv bytes") {
  auto build = [] {
    CsvWriter w;
    w.metadata("seed", "7");
    w.header({"x", "y"});
    w.row({CsvWriter::fmt(0.25), CsvWriter::fmt(1e-17)});
    return w.str();
  };
  CHECK(build() == build());
}

}  // namespace
}  // namespace distest
