// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "verso/publish.hpp"
#include "verso/transfer.hpp"

namespace verso {

// One step of a synthetic edit trace. `op` is one of: create (version 0
// content of `length` bytes), insert, delete, replace (at `offset` over
// `length` bytes), none (republish unchanged). All bytes come from a
// generator seeded by the scenario seed and `data_seed`, so a scenario is
// reproducible bit-for-bit.
struct EditSpec {
  std::uint64_t version = 0;
  std::string op;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;
  std::uint64_t data_seed = 0;
};

struct SimScenario {
  std::string name;
  std::uint64_t seed = 0;
  Variant variant = Variant::kV5;
  PublishParams params;                 // chunk/segment/consolidation knobs
  std::vector<EditSpec> edits;          // synthetic mode: dense versions from 0
  std::filesystem::path snapshots_dir;  // real-file mode: one file per version
};

// Parses the scenario JSON: {"name", "seed", "variant",
// "edits": [{"version", "op", "offset", "length", "data_seed"}]}.
// Optional keys: "min_chunk", "target_chunk", "max_chunk", "segment_size",
// "consolidate_depth", "consolidate_payload_ratio", "snapshots_dir".
// Exactly one of "edits" / "snapshots_dir" must be present.
// Malformed input raises DecodeError.
SimScenario parse_scenario(const std::string& json_text);
SimScenario load_scenario(const std::filesystem::path& file);

// Materializes the plaintext of every version in the trace.
std::vector<std::vector<std::uint8_t>> scenario_versions(const SimScenario& scenario);

// Publishes every version into a publisher store under work_dir, fetches
// each into a consumer store as it appears, and returns per-version
// transfer stats. Every fetch is checked byte-for-byte against the
// published plaintext before its stats are reported.
std::vector<TransferStats> run_scenario(const SimScenario& scenario,
                                        const std::filesystem::path& work_dir);

// Stats serializations: one JSON object per line, and a CSV with header
// version,variant,bytes_on_wire,full_size,savings_ratio.
std::string stats_jsonl(std::span<const TransferStats> stats);
std::string stats_csv(std::span<const TransferStats> stats);

}  // namespace verso
