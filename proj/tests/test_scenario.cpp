// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <string>
#include <vector>

#include "support/test_util.hpp"
#include "verso/errors.hpp"
#include "verso/scenario.hpp"

using namespace verso;

namespace {

SimScenario small_scenario() {
  SimScenario s;
  s.name = "unit";
  s.seed = 7;
  s.variant = Variant::kV5;
  s.params.variant = Variant::kV5;
  s.edits = {
      {0, "create", 0, 30000, 1},
      {1, "replace", 5000, 200, 2},
      {2, "none", 0, 0, 0},
  };
  return s;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("parsing reads every knob") {
  SimScenario s = parse_scenario(R"({
    "name": "knobs", "seed": 99, "variant": "v2",
    "min_chunk": 256, "target_chunk": 512, "max_chunk": 1024,
    "segment_size": 2048, "consolidate_depth": 4, "consolidate_payload_ratio": 0.25,
    "edits": [
      {"version": 0, "op": "create", "length": 1000, "data_seed": 5},
      {"version": 1, "op": "insert", "offset": 10, "length": 20, "data_seed": 6},
      {"version": 2, "op": "delete", "offset": 1, "length": 2},
      {"version": 3, "op": "none"}
    ]
  })");
  CHECK(s.name == "knobs");
  CHECK(s.seed == 99);
  CHECK(s.variant == Variant::kV2);
  CHECK(s.params.variant == Variant::kV2);
  CHECK(s.params.chunk.min_size == 256);
  CHECK(s.params.chunk.target_size == 512);
  CHECK(s.params.chunk.max_size == 1024);
  CHECK(s.params.segment_size == 2048);
  CHECK(s.params.consolidate_depth == 4);
  CHECK(s.params.consolidate_payload_ratio == 0.25);
  REQUIRE(s.edits.size() == 4);
  CHECK(s.edits[1].op == "insert");
  CHECK(s.edits[1].offset == 10);
  CHECK(s.edits[1].length == 20);
  CHECK(s.edits[1].data_seed == 6);
  CHECK(s.edits[3].op == "none");
  CHECK(s.snapshots_dir.empty());
}

TEST_CASE("parsing applies defaults") {
  SimScenario s = parse_scenario(
      R"({"name": "min", "variant": "v5", "edits": [{"version": 0, "op": "create", "length": 10}]})");
  CHECK(s.seed == 0);
  CHECK(s.params.chunk.min_size == ChunkParams{}.min_size);
  CHECK(s.params.segment_size == PublishParams{}.segment_size);
  CHECK(s.edits[0].data_seed == 0);
}

TEST_CASE("malformed scenarios are rejected") {
  auto reject = [](const std::string& text) {
    CHECK_THROWS_AS(parse_scenario(text), DecodeError);
  };
  reject("not json at all");
  reject(R"({"variant": "v5", "edits": []})");                    // no name
  reject(R"({"name": "x", "edits": []})");                        // no variant
  reject(R"({"name": "x", "variant": "v6", "edits": []})");       // bad variant
  reject(R"({"name": "x", "variant": "v5"})");                    // neither source
  reject(R"({"name": "x", "variant": "v5", "edits": [], "snapshots_dir": "d"})");  // both
  reject(R"({"name": "x", "variant": "v5",
             "edits": [{"version": 0, "op": "sparkle", "length": 1}]})");  // unknown op
  reject(R"({"name": "x", "variant": "v5",
             "edits": [{"version": 1, "op": "create", "length": 1}]})");  // not dense from 0
  reject(R"({"name": "x", "variant": "v5",
             "edits": [{"version": 0, "op": "create", "length": 1},
                       {"version": 2, "op": "none"}]})");  // gap
  reject(R"({"name": "x", "variant": "v5",
             "edits": [{"version": 0, "op": "insert", "length": 1}]})");  // v0 not create
  reject(R"({"name": "x", "variant": "v5", "edits": [{"op": "create"}]})");  // no version
  reject(R"({"name": "x", "variant": "v5", "edits": [{"version": 0}]})");    // no op
}

TEST_CASE("an empty edit list is a valid scenario") {
  SimScenario s = parse_scenario(R"({"name": "empty", "variant": "v5", "edits": []})");
  CHECK(s.edits.empty());
  CHECK(scenario_versions(s).empty());
  test::TempDir dir;
  CHECK(run_scenario(s, dir / "work").empty());
}

TEST_CASE("edit ops transform the previous version") {
  SimScenario s;
  s.name = "ops";
  s.seed = 3;
  s.variant = Variant::kV5;
  s.edits = {
      {0, "create", 0, 100, 1},
      {1, "insert", 10, 5, 2},
      {2, "delete", 10, 5, 0},
      {3, "replace", 40, 8, 3},
      {4, "none", 0, 0, 0},
  };
  auto versions = scenario_versions(s);
  REQUIRE(versions.size() == 5);
  const auto& v0 = versions[0];
  const auto& v1 = versions[1];
  REQUIRE(v0.size() == 100);
  REQUIRE(v1.size() == 105);
  CHECK(std::equal(v0.begin(), v0.begin() + 10, v1.begin()));
  CHECK(std::equal(v0.begin() + 10, v0.end(), v1.begin() + 15));

  CHECK(versions[2] == v0);  // deleting the inserted run restores v0
  const auto& v3 = versions[3];
  REQUIRE(v3.size() == 100);
  CHECK(std::equal(v0.begin(), v0.begin() + 40, v3.begin()));
  CHECK(std::equal(v0.begin() + 48, v0.end(), v3.begin() + 48));
  CHECK(!std::equal(v3.begin() + 40, v3.begin() + 48, v0.begin() + 40));
  CHECK(versions[4] == v3);

  // The trace is a pure function of the scenario.
  CHECK(scenario_versions(s) == versions);
  SimScenario reseeded = s;
  reseeded.seed = 4;
  CHECK(scenario_versions(reseeded)[0] != v0);
}

TEST_CASE("edits beyond the current size are rejected") {
  SimScenario s;
  s.name = "oob";
  s.variant = Variant::kV5;
  s.edits = {{0, "create", 0, 100, 1}, {1, "insert", 101, 1, 2}};
  CHECK_THROWS_AS(scenario_versions(s), ScriptRangeError);
  s.edits[1] = {1, "delete", 90, 20, 0};
  CHECK_THROWS_AS(scenario_versions(s), ScriptRangeError);
  s.edits[1] = {1, "replace", 90, 10, 0};  // touches the last byte exactly
  CHECK(scenario_versions(s).size() == 2);
}

TEST_CASE("snapshot directories feed real files in name order") {
  test::TempDir dir;
  auto a = test::rng_bytes(40000, 1);
  auto b = test::rng_bytes(40000, 2);
  auto c = a;
  c.resize(20000);
  test::write_file(dir / "snaps" / "000.bin", a);
  test::write_file(dir / "snaps" / "001.bin", b);
  test::write_file(dir / "snaps" / "002.bin", c);

  SimScenario s;
  s.name = "snaps";
  s.variant = Variant::kV5;
  s.snapshots_dir = dir / "snaps";
  auto versions = scenario_versions(s);
  REQUIRE(versions.size() == 3);
  CHECK(versions[0] == a);
  CHECK(versions[1] == b);
  CHECK(versions[2] == c);

  auto stats = run_scenario(s, dir / "work");
  REQUIRE(stats.size() == 3);
  CHECK(stats[2].full_size == 20000);
}

TEST_CASE("running a scenario reports one stat line per version") {
  test::TempDir dir;
  SimScenario s = small_scenario();
  auto stats = run_scenario(s, dir / "work");
  REQUIRE(stats.size() == 3);
  CHECK(stats[0].version == 0);
  CHECK(stats[0].variant == Variant::kV4);
  CHECK(stats[0].full_size == 30000);
  CHECK(stats[0].savings_ratio < 0.0);
  CHECK(stats[1].version == 1);
  CHECK(stats[1].bytes_on_wire < stats[0].bytes_on_wire);
  // The unchanged republication moves one catalog and nothing else.
  CHECK(stats[2].objects_transferred == 1);
  CHECK(stats[2].full_size == 30000);
}

TEST_CASE("scenario runs are deterministic") {
  test::TempDir dir;
  SimScenario s = small_scenario();
  auto first = run_scenario(s, dir / "one");
  auto second = run_scenario(s, dir / "two");
  CHECK(stats_jsonl(first) == stats_jsonl(second));
  CHECK(stats_csv(first) == stats_csv(second));
}

TEST_CASE("scenario names that are not legal name components still run") {
  test::TempDir dir;
  SimScenario s = small_scenario();
  s.name = "v7";  // shaped like a version marker; the publisher falls back
  auto stats = run_scenario(s, dir / "work");
  CHECK(stats.size() == 3);
}

TEST_CASE("stats serialize with fixed fields") {
  TransferStats s;
  s.version = 3;
  s.variant = Variant::kV5;
  s.objects_requested = 10;
  s.objects_transferred = 4;
  s.cache_hits = 6;
  s.bytes_on_wire = 1234;
  s.full_size = 5678;
  s.savings_ratio = 0.5;
  std::vector<TransferStats> one{s};

  CHECK(stats_jsonl(one) ==
        "{\"version\":3,\"variant\":\"v5\",\"objects_requested\":10,"
        "\"objects_transferred\":4,\"cache_hits\":6,\"bytes_on_wire\":1234,"
        "\"full_size\":5678,\"savings_ratio\":0.5}\n");
  CHECK(stats_csv(one) ==
        "version,variant,bytes_on_wire,full_size,savings_ratio\n"
        "3,v5,1234,5678,0.5\n");
  CHECK(stats_jsonl({}).empty());
  CHECK(stats_csv({}) == "version,variant,bytes_on_wire,full_size,savings_ratio\n");
}

}  // TEST_SUITE
