// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0
//
// verso: publish versioned files as signed catalogs over hash-named
// objects, fetch and verify any version, and benchmark transfer costs.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "verso/errors.hpp"
#include "verso/publish.hpp"
#include "verso/scenario.hpp"
#include "verso/transfer.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw verso::IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw verso::IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw verso::IoError("write failed on " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string hex_of(std::span<const std::uint8_t> bytes) {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::array<std::uint8_t, 32> key_from_hex(const std::string& text) {
  if (text.size() != 64) throw verso::DecodeError("key hex must be 64 characters");
  return verso::Digest::from_hex(text).bytes;
}

void save_keypair(const fs::path& path, const verso::KeyPair& key) {
  ordered_json j;
  j["scheme_id"] = verso::kSchemeEd25519;
  j["public_key"] = hex_of(key.public_key);
  j["private_key"] = hex_of(key.private_key);
  write_text(path, j.dump(2) + "\n");
}

verso::KeyPair load_keypair(const fs::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
    verso::KeyPair key;
    key.private_key = key_from_hex(j.at("private_key").get<std::string>());
    key.public_key = key_from_hex(j.at("public_key").get<std::string>());
    return key;
  } catch (const nlohmann::json::exception& e) {
    throw verso::DecodeError("key file " + path.string() + ": " + e.what());
  }
}

// A trusted-keys file is either a keygen JSON file or a bare hex line.
std::array<std::uint8_t, 32> load_public_key(const fs::path& path) {
  std::vector<std::uint8_t> raw = read_file(path);
  std::string text(raw.begin(), raw.end());
  std::size_t start = text.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) throw verso::DecodeError(path.string() + " is empty");
  if (text[start] == '{') {
    try {
      ordered_json j = ordered_json::parse(text);
      return key_from_hex(j.at("public_key").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw verso::DecodeError("trusted keys file " + path.string() + ": " + e.what());
    }
  }
  std::size_t end = text.find_first_of(" \t\r\n", start);
  return key_from_hex(text.substr(start, end == std::string::npos ? end : end - start));
}

verso::KeyPair derive_seeded_key(std::uint64_t seed) {
  std::vector<std::uint8_t> bytes(8);
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<std::uint8_t>(seed >> (8 * (7 - i)));
  return verso::keypair_from_seed(verso::sha256(bytes).span());
}

// Shared publishing/fetch options mapped straight onto PublishParams.
struct CommonOpts {
  std::string store;
  std::string variant = "v5";
  std::uint64_t min_chunk = 4096;
  std::uint64_t target_chunk = 8192;
  std::uint64_t max_chunk = 16384;
  std::uint64_t segment_size = 8192;
  std::size_t consolidate_depth = 8;
  double consolidate_ratio = 0.5;
  bool json = false;

  verso::PublishParams params(const std::string& chunk_prefix) const {
    verso::PublishParams p;
    auto v = verso::parse_variant(variant);
    if (!v) throw verso::DecodeError("variant must be v1..v5, got " + variant);
    p.variant = *v;
    p.chunk = {min_chunk, target_chunk, max_chunk};
    p.segment_size = segment_size;
    p.consolidate_depth = consolidate_depth;
    p.consolidate_payload_ratio = consolidate_ratio;
    if (!chunk_prefix.empty()) p.chunk_prefix = verso::HierarchicalName::parse(chunk_prefix);
    return p;
  }
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, bool with_params) {
  cmd->add_option("--store", o.store, "store root directory")->required();
  cmd->add_flag("--json", o.json, "machine-readable output");
  if (with_params) {
    cmd->add_option("--variant", o.variant, "catalog variant v1..v5 (default v5)")
        ->check(CLI::IsMember({"v1", "v2", "v3", "v4", "v5"}));
    cmd->add_option("--min-chunk", o.min_chunk, "minimum chunk size in bytes");
    cmd->add_option("--target-chunk", o.target_chunk, "target chunk size in bytes");
    cmd->add_option("--max-chunk", o.max_chunk, "maximum chunk size in bytes");
    cmd->add_option("--segment-size", o.segment_size, "segment size for v1-v3 in bytes");
    cmd->add_option("--consolidate-depth", o.consolidate_depth,
                    "publish a fresh ground truth past this chain depth");
    cmd->add_option("--consolidate-ratio", o.consolidate_ratio,
                    "ground-truth when accumulated diff bytes exceed this fraction of the file");
  }
}

// Finds the catalog for (name, version) among a store's catalogs.
verso::Digest find_catalog(const verso::CatalogTree& tree, const verso::HierarchicalName& base,
                           std::optional<std::uint64_t> version, std::uint64_t* found_version) {
  std::optional<verso::Digest> best;
  std::uint64_t best_version = 0;
  for (const auto& [digest, catalog] : tree.nodes()) {
    if (catalog.name.base() != base) continue;
    std::uint64_t v = catalog.version();
    if (version && v != *version) continue;
    if (!best || v > best_version) {
      best = digest;
      best_version = v;
    }
  }
  if (!best) {
    throw verso::NotFoundError("no catalog for " + base.render() +
                               (version ? " version " + std::to_string(*version) : ""));
  }
  if (found_version != nullptr) *found_version = best_version;
  return *best;
}

int run_keygen(const std::string& out, std::optional<std::uint64_t> seed, bool json) {
  verso::KeyPair key = seed ? derive_seeded_key(*seed) : verso::generate_keypair();
  save_keypair(out, key);
  if (json) {
    ordered_json j;
    j["key_file"] = out;
    j["public_key"] = hex_of(key.public_key);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "wrote " << out << "\npublic key: " << hex_of(key.public_key) << "\n";
  }
  return kExitOk;
}

int run_publish(const CommonOpts& o, const std::string& file, const std::string& name,
                const std::string& key_path, const std::string& chunk_prefix,
                std::optional<std::uint64_t> seed) {
  verso::ObjectStore store(o.store);
  verso::CatalogTree tree = verso::tree_from_store(store);

  // Default key lives in the store so every version of a line is signed by
  // the same identity unless the caller says otherwise.
  fs::path key_file = key_path.empty() ? fs::path(o.store) / "publisher.key" : fs::path(key_path);
  verso::KeyPair key;
  if (fs::exists(key_file)) {
    key = load_keypair(key_file);
  } else {
    key = seed ? derive_seeded_key(*seed) : verso::generate_keypair();
    save_keypair(key_file, key);
  }
  write_text(fs::path(o.store) / "publisher.pub", hex_of(key.public_key) + "\n");

  verso::HierarchicalName base = verso::HierarchicalName::parse(name).base();
  verso::Publisher publisher(store, tree, key, base, o.params(chunk_prefix));
  verso::Publisher::Info info = publisher.publish(read_file(file));

  if (o.json) {
    ordered_json j;
    j["name"] = base.render();
    j["version"] = info.version;
    j["catalog"] = info.catalog_digest.hex();
    j["ground_truth"] = info.ground_truth;
    j["new_objects"] = info.new_objects;
    j["new_object_bytes"] = info.new_object_bytes;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "published " << base.render() << " version " << info.version << "\ncatalog "
              << info.catalog_digest.hex() << (info.ground_truth ? " (ground truth)" : " (diff)")
              << "\nnew objects: " << info.new_objects << " (" << info.new_object_bytes
              << " bytes)\n";
  }
  return kExitOk;
}

int run_get(const CommonOpts& o, const std::string& remote_path, const std::string& name,
            std::optional<std::uint64_t> version, std::string out_path,
            const std::string& trusted_keys) {
  verso::ObjectStore remote(remote_path);
  verso::ObjectStore local(o.store);
  verso::CatalogTree remote_tree = verso::tree_from_store(remote);

  verso::HierarchicalName base = verso::HierarchicalName::parse(name).base();
  std::uint64_t found_version = 0;
  verso::Digest target = find_catalog(remote_tree, base, version, &found_version);

  // Trust root: explicit file, or the publisher.pub the publish command
  // drops into its store. Without either the fetch is unverified.
  std::optional<std::array<std::uint8_t, 32>> pub;
  if (!trusted_keys.empty()) {
    pub = load_public_key(trusted_keys);
  } else if (fs::exists(fs::path(remote_path) / "publisher.pub")) {
    pub = load_public_key(fs::path(remote_path) / "publisher.pub");
  }

  verso::CatalogTree local_tree = verso::tree_from_store(local);
  verso::FetchResult fetched = verso::fetch_version(
      remote, local, local_tree, target,
      pub ? std::span<const std::uint8_t>(pub->data(), pub->size())
          : std::span<const std::uint8_t>());

  if (out_path.empty()) {
    out_path = base.components().empty() ? "out.bin" : base.components().back();
    out_path += ".v" + std::to_string(found_version);
  }
  write_file(out_path, fetched.data);

  if (o.json) {
    ordered_json j;
    j["name"] = base.render();
    j["version"] = found_version;
    j["out"] = out_path;
    j["bytes"] = fetched.data.size();
    j["catalogs_verified"] = fetched.catalogs_verified;
    j["verified"] = pub.has_value();
    j["bytes_on_wire"] = fetched.stats.bytes_on_wire;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "wrote " << fetched.data.size() << " bytes to " << out_path << "\n";
    if (pub) {
      std::cout << "catalogs verified: " << fetched.catalogs_verified << "\n";
    } else {
      std::cout << "WARNING: no trusted key; catalog signatures not checked\n";
    }
  }
  return kExitOk;
}

int run_verify(const CommonOpts& o, const std::string& trusted_keys) {
  verso::ObjectStore store(o.store);
  fs::path key_file = trusted_keys.empty() ? fs::path(o.store) / "publisher.pub"
                                           : fs::path(trusted_keys);
  std::array<std::uint8_t, 32> pub = load_public_key(key_file);

  std::size_t catalogs_ok = 0;
  std::size_t objects_ok = 0;
  std::vector<std::string> failures;
  for (const auto& [digest, entry] : store.index()) {
    try {
      std::vector<std::uint8_t> bytes = store.get(digest);  // digest re-check
      if (entry.kind == verso::EncodedKind::kCatalog) {
        if (!verso::verify_catalog_bytes(bytes, pub)) {
          failures.push_back("catalog " + digest.hex() + ": signature rejected");
          continue;
        }
        ++catalogs_ok;
      } else {
        ++objects_ok;
      }
    } catch (const verso::Error& e) {
      failures.push_back(e.what());
    }
  }

  if (o.json) {
    ordered_json j;
    j["catalogs_ok"] = catalogs_ok;
    j["objects_ok"] = objects_ok;
    j["failures"] = failures;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "catalogs verified: " << catalogs_ok << "\nobjects verified: " << objects_ok
              << "\n";
    for (const std::string& f : failures) std::cout << "FAIL: " << f << "\n";
  }
  return failures.empty() ? kExitOk : kExitDataError;
}

int run_bench(const std::string& scenario_path, const std::string& out_dir,
              const std::string& work_dir, const std::string& variant_override, bool json) {
  verso::SimScenario scenario = verso::load_scenario(scenario_path);
  if (!variant_override.empty()) {
    auto v = verso::parse_variant(variant_override);
    if (!v) throw verso::DecodeError("variant must be v1..v5, got " + variant_override);
    scenario.variant = *v;
    scenario.params.variant = *v;
  }

  fs::path work = work_dir.empty() ? fs::path(out_dir) / "work" : fs::path(work_dir);
  fs::remove_all(work);  // a bench run starts from cold stores
  std::vector<verso::TransferStats> stats = verso::run_scenario(scenario, work);

  fs::create_directories(out_dir);
  std::string stem = scenario.name.empty() ? "scenario" : scenario.name;
  stem += "-" + std::string(verso::variant_name(scenario.variant));
  fs::path jsonl_path = fs::path(out_dir) / (stem + ".jsonl");
  fs::path csv_path = fs::path(out_dir) / (stem + ".csv");
  write_text(jsonl_path, verso::stats_jsonl(stats));
  write_text(csv_path, verso::stats_csv(stats));

  if (json) {
    std::cout << verso::stats_jsonl(stats);
  } else {
    std::printf("%-8s %-7s %9s %12s %12s %9s\n", "version", "variant", "objects", "wire_bytes",
                "full_size", "savings");
    for (const verso::TransferStats& s : stats) {
      std::printf("%-8llu %-7s %9llu %12llu %12llu %8.2f%%\n",
                  static_cast<unsigned long long>(s.version),
                  std::string(verso::variant_name(s.variant)).c_str(),
                  static_cast<unsigned long long>(s.objects_requested),
                  static_cast<unsigned long long>(s.bytes_on_wire),
                  static_cast<unsigned long long>(s.full_size), 100.0 * s.savings_ratio);
    }
    std::cout << "stats written to " << jsonl_path.string() << " and " << csv_path.string()
              << "\n";
  }
  return kExitOk;
}

int run_stats(const CommonOpts& o) {
  verso::ObjectStore store(o.store);
  std::uint64_t object_count = 0;
  std::uint64_t object_bytes = 0;
  std::uint64_t catalog_count = 0;
  std::uint64_t catalog_bytes = 0;
  for (const auto& [digest, entry] : store.index()) {
    if (entry.kind == verso::EncodedKind::kCatalog) {
      ++catalog_count;
      catalog_bytes += entry.size;
    } else {
      ++object_count;
      object_bytes += entry.size;
    }
  }

  // Versions present, grouped by base name.
  verso::CatalogTree tree = verso::tree_from_store(store);
  std::map<std::string, std::vector<std::uint64_t>> versions;
  for (const auto& [digest, catalog] : tree.nodes()) {
    versions[catalog.name.base().render()].push_back(catalog.version());
  }
  for (auto& [name, list] : versions) std::sort(list.begin(), list.end());

  if (o.json) {
    ordered_json j;
    j["payload_objects"] = object_count;
    j["payload_bytes"] = object_bytes;
    j["catalogs"] = catalog_count;
    j["catalog_bytes"] = catalog_bytes;
    ordered_json names = ordered_json::object();
    for (const auto& [name, list] : versions) names[name] = list;
    j["versions"] = names;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "payload objects: " << object_count << " (" << object_bytes << " bytes)\n"
              << "catalogs:        " << catalog_count << " (" << catalog_bytes << " bytes)\n";
    for (const auto& [name, list] : versions) {
      std::cout << name << ": versions";
      for (std::uint64_t v : list) std::cout << " " << v;
      std::cout << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"versioned content publishing over hash-named objects"};
  app.require_subcommand(1);

  // keygen
  std::string kg_out = "publisher.key";
  std::optional<std::uint64_t> kg_seed;
  bool kg_json = false;
  CLI::App* keygen = app.add_subcommand("keygen", "generate a signing keypair");
  keygen->add_option("--out", kg_out, "key file to write");
  keygen->add_option("--seed", kg_seed, "derive the key deterministically from a seed");
  keygen->add_flag("--json", kg_json, "machine-readable output");

  // publish
  CommonOpts pub_opts;
  std::string pub_file;
  std::string pub_name = "/doc";
  std::string pub_key;
  std::string pub_chunk_prefix;
  std::optional<std::uint64_t> pub_seed;
  CLI::App* publish = app.add_subcommand("publish", "publish a file as the next version");
  publish->add_option("file", pub_file, "file to publish")->required();
  publish->add_option("--name", pub_name, "content name (default /doc)");
  publish->add_option("--key", pub_key, "key file (default <store>/publisher.key)");
  publish->add_option("--chunk-prefix", pub_chunk_prefix,
                      "name prefix for chunk objects (default: content name)");
  publish->add_option("--seed", pub_seed, "seed for implicit key generation");
  add_common_flags(publish, pub_opts, true);

  // get
  CommonOpts get_opts;
  std::string get_remote;
  std::string get_name = "/doc";
  std::optional<std::uint64_t> get_version;
  std::string get_out;
  std::string get_keys;
  CLI::App* get = app.add_subcommand("get", "fetch and reconstruct a version");
  get->add_option("--remote-store", get_remote, "publisher store to fetch from")->required();
  get->add_option("--name", get_name, "content name (default /doc)");
  get->add_option("--version", get_version, "version number (default: latest)");
  get->add_option("--out", get_out, "output file (default <name>.v<version>)");
  get->add_option("--trusted-keys", get_keys,
                  "public key file (default <remote-store>/publisher.pub)");
  add_common_flags(get, get_opts, false);

  // verify
  CommonOpts verify_opts;
  std::string verify_keys;
  CLI::App* verify = app.add_subcommand("verify", "check every object and catalog in a store");
  verify->add_option("--trusted-keys", verify_keys,
                     "public key file (default <store>/publisher.pub)");
  add_common_flags(verify, verify_opts, false);

  // bench
  std::string bench_scenario;
  std::string bench_out = "bench-out";
  std::string bench_work;
  std::string bench_variant;
  bool bench_json = false;
  CLI::App* bench = app.add_subcommand("bench", "run a transfer-cost scenario");
  bench->add_option("scenario", bench_scenario, "scenario JSON file")->required();
  bench->add_option("--out-dir", bench_out, "directory for stats outputs");
  bench->add_option("--work-dir", bench_work, "scratch directory for stores");
  bench->add_option("--variant", bench_variant, "override the scenario's variant")
      ->check(CLI::IsMember({"v1", "v2", "v3", "v4", "v5"}));
  bench->add_flag("--json", bench_json, "print JSONL stats to stdout");

  // stats
  CommonOpts stats_opts;
  CLI::App* stats = app.add_subcommand("stats", "summarize a store");
  add_common_flags(stats, stats_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (keygen->parsed()) return run_keygen(kg_out, kg_seed, kg_json);
    if (publish->parsed()) {
      return run_publish(pub_opts, pub_file, pub_name, pub_key, pub_chunk_prefix, pub_seed);
    }
    if (get->parsed()) {
      return run_get(get_opts, get_remote, get_name, get_version, get_out, get_keys);
    }
    if (verify->parsed()) return run_verify(verify_opts, verify_keys);
    if (bench->parsed()) {
      return run_bench(bench_scenario, bench_out, bench_work, bench_variant, bench_json);
    }
    if (stats->parsed()) return run_stats(stats_opts);
  } catch (const verso::DecodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bench->parsed() ? kExitUsage : kExitDataError;
  } catch (const verso::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}
