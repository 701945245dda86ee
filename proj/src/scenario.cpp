// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <utility>

#include <json.hpp>

#include "verso/errors.hpp"

namespace fs = std::filesystem;

namespace verso {

namespace {

using nlohmann::ordered_json;

std::vector<std::uint8_t> random_bytes(std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> out(count);
  std::uint64_t word = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (i % 8 == 0) word = gen();
    out[i] = static_cast<std::uint8_t>(word >> ((i % 8) * 8));
  }
  return out;
}

std::uint64_t edit_seed(const SimScenario& scenario, const EditSpec& edit) {
  // Fixed mixing formula so traces are stable across runs and platforms.
  std::uint64_t h = scenario.seed;
  h ^= edit.data_seed * 0x9e3779b97f4a7c15ULL;
  h ^= edit.version << 32;
  return h;
}

void check_range(const EditSpec& edit, std::uint64_t size, std::uint64_t needed) {
  if (needed > size) {
    throw ScriptRangeError("edit at version " + std::to_string(edit.version) + " touches byte " +
                           std::to_string(needed) + " of a " + std::to_string(size) +
                           " byte version");
  }
}

std::string format_ratio(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

SimScenario parse_scenario(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("scenario JSON: ") + e.what());
  }
  try {
    SimScenario s;
    s.name = j.at("name").get<std::string>();
    s.seed = j.value("seed", std::uint64_t{0});
    std::string variant_text = j.at("variant").get<std::string>();
    auto variant = parse_variant(variant_text);
    if (!variant) throw DecodeError("scenario variant must be v1..v5, got " + variant_text);
    s.variant = *variant;
    s.params.variant = *variant;
    s.params.chunk.min_size = j.value("min_chunk", s.params.chunk.min_size);
    s.params.chunk.target_size = j.value("target_chunk", s.params.chunk.target_size);
    s.params.chunk.max_size = j.value("max_chunk", s.params.chunk.max_size);
    s.params.segment_size = j.value("segment_size", s.params.segment_size);
    s.params.consolidate_depth = j.value("consolidate_depth", s.params.consolidate_depth);
    s.params.consolidate_payload_ratio =
        j.value("consolidate_payload_ratio", s.params.consolidate_payload_ratio);

    bool has_edits = j.contains("edits");
    bool has_snapshots = j.contains("snapshots_dir");
    if (has_edits == has_snapshots) {
      throw DecodeError("scenario needs exactly one of \"edits\" or \"snapshots_dir\"");
    }
    if (has_snapshots) {
      s.snapshots_dir = j.at("snapshots_dir").get<std::string>();
      return s;
    }
    for (const auto& je : j.at("edits")) {
      EditSpec e;
      e.version = je.at("version").get<std::uint64_t>();
      e.op = je.at("op").get<std::string>();
      e.offset = je.value("offset", std::uint64_t{0});
      e.length = je.value("length", std::uint64_t{0});
      e.data_seed = je.value("data_seed", std::uint64_t{0});
      if (e.op != "create" && e.op != "insert" && e.op != "delete" && e.op != "replace" &&
          e.op != "none") {
        throw DecodeError("unknown edit op \"" + e.op + "\"");
      }
      if (e.version != s.edits.size()) {
        throw DecodeError("edit versions must be dense from 0; got " +
                          std::to_string(e.version) + " at position " +
                          std::to_string(s.edits.size()));
      }
      s.edits.push_back(std::move(e));
    }
    if (!s.edits.empty() && s.edits.front().op != "create") {
      throw DecodeError("version 0 must be a create edit");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(std::string("scenario JSON: ") + e.what());
  }
}

SimScenario load_scenario(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open scenario " + file.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(text);
}

std::vector<std::vector<std::uint8_t>> scenario_versions(const SimScenario& scenario) {
  std::vector<std::vector<std::uint8_t>> versions;

  if (!scenario.snapshots_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(scenario.snapshots_dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw IoError("cannot open snapshot " + file.string());
      versions.emplace_back((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    }
    return versions;
  }

  std::vector<std::uint8_t> current;
  for (const EditSpec& edit : scenario.edits) {
    if (edit.op == "create") {
      current = random_bytes(edit.length, edit_seed(scenario, edit));
    } else if (edit.op == "insert") {
      check_range(edit, current.size(), edit.offset);
      std::vector<std::uint8_t> bytes = random_bytes(edit.length, edit_seed(scenario, edit));
      current.insert(current.begin() + static_cast<std::ptrdiff_t>(edit.offset), bytes.begin(),
                     bytes.end());
    } else if (edit.op == "delete") {
      check_range(edit, current.size(), edit.offset + edit.length);
      current.erase(current.begin() + static_cast<std::ptrdiff_t>(edit.offset),
                    current.begin() + static_cast<std::ptrdiff_t>(edit.offset + edit.length));
    } else if (edit.op == "replace") {
      check_range(edit, current.size(), edit.offset + edit.length);
      std::vector<std::uint8_t> bytes = random_bytes(edit.length, edit_seed(scenario, edit));
      std::copy(bytes.begin(), bytes.end(),
                current.begin() + static_cast<std::ptrdiff_t>(edit.offset));
    }
    // "none" republishes the previous bytes untouched.
    versions.push_back(current);
  }
  return versions;
}

std::vector<TransferStats> run_scenario(const SimScenario& scenario, const fs::path& work_dir) {
  std::vector<std::vector<std::uint8_t>> versions = scenario_versions(scenario);
  std::vector<TransferStats> stats;
  if (versions.empty()) return stats;

  ObjectStore publisher_store(work_dir / "publisher");
  ObjectStore consumer_store(work_dir / "consumer");
  CatalogTree publisher_tree = tree_from_store(publisher_store);
  CatalogTree consumer_tree = tree_from_store(consumer_store);

  // All scenario randomness, keys included, flows from the seed.
  std::vector<std::uint8_t> seed_bytes(8);
  for (int i = 0; i < 8; ++i) {
    seed_bytes[i] = static_cast<std::uint8_t>(scenario.seed >> (8 * (7 - i)));
  }
  KeyPair key = keypair_from_seed(sha256(seed_bytes).span());

  HierarchicalName base_name;
  try {
    base_name = HierarchicalName({scenario.name});
  } catch (const NameParseError&) {
    base_name = HierarchicalName({"doc"});
  }

  Publisher publisher(publisher_store, publisher_tree, key, base_name, scenario.params);
  for (const auto& data : versions) {
    Publisher::Info info = publisher.publish(data);
    FetchResult fetched = fetch_version(publisher_store, consumer_store, consumer_tree,
                                        info.catalog_digest, key.public_key);
    if (fetched.data != data) {
      throw IntegrityError("scenario " + scenario.name + " version " +
                           std::to_string(info.version) +
                           ": fetched bytes differ from published bytes");
    }
    stats.push_back(fetched.stats);
  }
  return stats;
}

std::string stats_jsonl(std::span<const TransferStats> stats) {
  std::string out;
  for (const TransferStats& s : stats) {
    ordered_json j;
    j["version"] = s.version;
    j["variant"] = std::string(variant_name(s.variant));
    j["objects_requested"] = s.objects_requested;
    j["objects_transferred"] = s.objects_transferred;
    j["cache_hits"] = s.cache_hits;
    j["bytes_on_wire"] = s.bytes_on_wire;
    j["full_size"] = s.full_size;
    j["savings_ratio"] = s.savings_ratio;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string stats_csv(std::span<const TransferStats> stats) {
  std::string out = "version,variant,bytes_on_wire,full_size,savings_ratio\n";
  for (const TransferStats& s : stats) {
    out += std::to_string(s.version);
    out += ',';
    out += variant_name(s.variant);
    out += ',';
    out += std::to_string(s.bytes_on_wire);
    out += ',';
    out += std::to_string(s.full_size);
    out += ',';
    out += format_ratio(s.savings_ratio);
    out += '\n';
  }
  return out;
}

}  // namespace verso
