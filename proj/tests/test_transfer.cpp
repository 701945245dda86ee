// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <random>
#include <vector>

#include "support/test_util.hpp"
#include "verso/errors.hpp"
#include "verso/publish.hpp"
#include "verso/transfer.hpp"

using namespace verso;
namespace fs = std::filesystem;

namespace {

struct TransferFixture {
  test::TempDir dir;
  ObjectStore remote{dir / "remote"};
  ObjectStore local{dir / "local"};
  CatalogTree remote_tree;
  CatalogTree local_tree;
  KeyPair key = keypair_from_seed(sha256(test::rng_bytes(8, 7)).span());
  HierarchicalName base{{"site", "doc"}};

  Publisher publisher(Variant v, double ratio = 0.5) {
    PublishParams p;
    p.variant = v;
    p.consolidate_payload_ratio = ratio;
    return Publisher(remote, remote_tree, key, base, p);
  }

  FetchResult fetch(const Digest& version, bool pin_key = true) {
    return fetch_version(remote, local, local_tree, version,
                         pin_key ? std::span<const std::uint8_t>(key.public_key)
                                 : std::span<const std::uint8_t>{});
  }
};

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("a cold fetch moves every object exactly once") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  auto data = test::rng_bytes(200000, 1);
  Publisher::Info info = pub.publish(data);

  FetchResult result = f.fetch(info.catalog_digest);
  CHECK(result.data == data);
  CHECK(result.stats.version == 0);
  CHECK(result.stats.variant == Variant::kV4);  // a chunked ground truth
  CHECK(result.stats.full_size == data.size());
  CHECK(result.stats.cache_hits == 0);
  CHECK(result.stats.objects_transferred == result.stats.objects_requested);
  CHECK(result.stats.objects_requested == f.remote.count());
  CHECK(result.catalogs_verified == 1);

  // Everything crossed the wire, so the moved bytes equal the store bytes
  // and exceed the plaintext (names, headers, signature).
  std::uint64_t store_bytes = 0;
  for (const auto& [digest, entry] : f.remote.index()) store_bytes += entry.size;
  CHECK(result.stats.bytes_on_wire == store_bytes);
  CHECK(result.stats.bytes_on_wire >= result.stats.full_size);
  CHECK(result.stats.savings_ratio <= 0.0);
  CHECK(f.local.count() == f.remote.count());
  CHECK(f.local_tree.contains(info.catalog_digest));
}

TEST_CASE("a warm refetch is pure cache") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  auto data = test::rng_bytes(120000, 2);
  Publisher::Info info = pub.publish(data);

  f.fetch(info.catalog_digest);
  FetchResult again = f.fetch(info.catalog_digest);
  CHECK(again.data == data);
  CHECK(again.stats.objects_transferred == 0);
  CHECK(again.stats.bytes_on_wire == 0);
  CHECK(again.stats.cache_hits == again.stats.objects_requested);
  CHECK(again.stats.savings_ratio == 1.0);
}

TEST_CASE("an incremental fetch ships the delta only") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  auto data = test::rng_bytes(1 << 20, 3);
  Publisher::Info v0 = pub.publish(data);

  auto edited = data;
  auto patch = test::rng_bytes(1024, 4);
  std::copy(patch.begin(), patch.end(), edited.begin() + 400000);
  Publisher::Info v1 = pub.publish(edited);
  REQUIRE(!v1.ground_truth);

  f.fetch(v0.catalog_digest);
  FetchResult result = f.fetch(v1.catalog_digest);
  CHECK(result.data == edited);
  CHECK(result.stats.objects_transferred <= 6);  // one catalog plus a few chunks
  CHECK(result.stats.bytes_on_wire <= 100 * 1024);
  CHECK(result.stats.cache_hits > 100);
  CHECK(result.stats.objects_transferred + result.stats.cache_hits ==
        result.stats.objects_requested);
  CHECK(result.stats.savings_ratio > 0.9);
  CHECK(result.catalogs_verified == 2);  // the diff and its ground truth
}

TEST_CASE("an unchanged republication costs one catalog") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  auto data = test::rng_bytes(150000, 5);
  Publisher::Info v0 = pub.publish(data);
  Publisher::Info v1 = pub.publish(data);  // no edit
  REQUIRE(!v1.ground_truth);

  f.fetch(v0.catalog_digest);
  FetchResult result = f.fetch(v1.catalog_digest);
  CHECK(result.data == data);
  CHECK(result.stats.objects_transferred == 1);
  CHECK(result.stats.bytes_on_wire ==
        canonical_encode(f.remote_tree.at(v1.catalog_digest)).size());
  CHECK(result.stats.variant == Variant::kV5);
}

TEST_CASE("fetches verify exactly the catalogs on the resolution path") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5, 10.0);
  std::mt19937_64 rng(6);
  auto data = test::rng_bytes(80000, 7);
  Digest head;
  for (int i = 0; i < 4; ++i) {
    if (i > 0) data = test::mutate(std::move(data), rng);
    head = pub.publish(data).catalog_digest;
  }
  FetchResult pinned = f.fetch(head);
  CHECK(pinned.catalogs_verified == f.remote_tree.resolution_path(head).size());
  CHECK(pinned.catalogs_verified == 4);

  // Without a pinned key nothing is signature-checked; digests still guard
  // the payload bytes.
  TransferFixture unpinned;
  Publisher pub2 = unpinned.publisher(Variant::kV5);
  Publisher::Info info = pub2.publish(test::rng_bytes(50000, 8));
  FetchResult open = unpinned.fetch(info.catalog_digest, false);
  CHECK(open.catalogs_verified == 0);
  CHECK(open.data.size() == 50000);
}

TEST_CASE("a wrong pinned key aborts the fetch") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  Publisher::Info info = pub.publish(test::rng_bytes(40000, 9));
  KeyPair other = keypair_from_seed(sha256(test::rng_bytes(8, 10)).span());
  CHECK_THROWS_AS(fetch_version(f.remote, f.local, f.local_tree, info.catalog_digest,
                                other.public_key),
                  IntegrityError);
}

TEST_CASE("corrupted remote bytes cannot cross the wire") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  Publisher::Info info = pub.publish(test::rng_bytes(60000, 11));
  Digest victim = f.remote_tree.resolve_chunks(info.catalog_digest).front();

  std::string hex = victim.hex();
  fs::path path = f.remote.root() / "objects" / hex.substr(0, 2) / hex.substr(2);
  auto bytes = test::read_file(path);
  bytes[bytes.size() / 2] ^= 0x40;
  test::write_file(path, bytes);

  CHECK_THROWS_AS(f.fetch(info.catalog_digest), IntegrityError);
}

TEST_CASE("a remote missing an object fails with a clear error") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  Publisher::Info info = pub.publish(test::rng_bytes(60000, 12));
  Digest victim = f.remote_tree.resolve_chunks(info.catalog_digest).front();

  std::string hex = victim.hex();
  fs::remove(f.remote.root() / "objects" / hex.substr(0, 2) / hex.substr(2));
  ObjectStore incomplete(f.remote.root());  // rescan sees the gap
  CatalogTree fresh_tree;
  CHECK_THROWS_AS(fetch_version(incomplete, f.local, fresh_tree, info.catalog_digest,
                                f.key.public_key),
                  RepoIncompleteError);
}

TEST_CASE("an empty version costs only its catalog") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5);
  Publisher::Info info = pub.publish({});
  FetchResult result = f.fetch(info.catalog_digest);
  CHECK(result.data.empty());
  CHECK(result.stats.full_size == 0);
  CHECK(result.stats.savings_ratio == 0.0);
  CHECK(result.stats.objects_transferred == 1);
}

TEST_CASE("a warm cache never fetches more than a cold one") {
  for (Variant v : {Variant::kV1, Variant::kV2, Variant::kV5}) {
    TransferFixture warm;
    Publisher pub = warm.publisher(v, 10.0);
    std::mt19937_64 rng(static_cast<std::uint64_t>(v) + 40);
    auto data = test::rng_bytes(70000, 41);
    std::vector<Digest> heads;
    std::vector<std::vector<std::uint8_t>> expected;
    for (int i = 0; i < 5; ++i) {
      if (i > 0) data = test::mutate(std::move(data), rng, 2000);
      heads.push_back(pub.publish(data).catalog_digest);
      expected.push_back(data);
    }
    for (std::size_t i = 0; i < heads.size(); ++i) {
      FetchResult sequential = warm.fetch(heads[i]);
      CHECK(sequential.data == expected[i]);
      CHECK(sequential.stats.objects_transferred + sequential.stats.cache_hits ==
            sequential.stats.objects_requested);

      // The same version into an empty cache, from the same remote.
      ObjectStore cold_local(warm.dir / ("cold" + std::to_string(static_cast<int>(v)) +
                                         std::to_string(i)));
      CatalogTree cold_tree;
      FetchResult cold = fetch_version(warm.remote, cold_local, cold_tree, heads[i],
                                       warm.key.public_key);
      CHECK(cold.data == expected[i]);
      CHECK(sequential.stats.bytes_on_wire <= cold.stats.bytes_on_wire);
      CHECK(sequential.stats.objects_transferred <= cold.stats.objects_transferred);
    }
  }
}

TEST_CASE("catalog loading from a store is idempotent") {
  TransferFixture f;
  Publisher pub = f.publisher(Variant::kV5, 10.0);
  std::mt19937_64 rng(51);
  auto data = test::rng_bytes(50000, 52);
  for (int i = 0; i < 3; ++i) {
    if (i > 0) data = test::mutate(std::move(data), rng);
    pub.publish(data);
  }
  CatalogTree tree = tree_from_store(f.remote);
  CHECK(tree.size() == 3);
  CHECK(load_catalogs(f.remote, tree) == 0);
}

}  // TEST_SUITE
