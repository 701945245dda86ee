// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "support/test_util.hpp"
#include "verso/byte_delta.hpp"
#include "verso/errors.hpp"
#include "verso/object_store.hpp"
#include "verso/publish.hpp"
#include "verso/wire.hpp"

using namespace verso;

namespace {

struct PubFixture {
  test::TempDir dir;
  ObjectStore store{dir / "store"};
  CatalogTree tree;
  KeyPair key = keypair_from_seed(sha256(test::rng_bytes(8, 99)).span());
  HierarchicalName base{{"pub", "doc"}};

  PublishParams params(Variant v) const {
    PublishParams p;
    p.variant = v;
    return p;
  }

  // Stores the result's objects and catalog and inserts it into the tree.
  Digest commit(PublishResult result) {
    for (const ContentObject& o : result.new_objects) store.put(o);
    store.put(result.catalog);
    return tree.insert(std::move(result.catalog));
  }

  std::vector<std::uint8_t> rebuild(const Digest& version) {
    return reconstruct_version(tree, store_source(store), version);
  }
};

constexpr Variant kAllVariants[] = {Variant::kV1, Variant::kV2, Variant::kV3, Variant::kV4,
                                    Variant::kV5};

}  // namespace

TEST_SUITE("publish") {

TEST_CASE("ground truths round trip for every variant") {
  for (Variant v : kAllVariants) {
    PubFixture f;
    auto data = test::rng_bytes(50001, 3);  // odd size: last segment is partial
    PublishResult result = make_ground_truth(f.base, 0, data, f.params(v), f.key);
    CHECK(result.catalog.is_ground_truth());
    CHECK(result.catalog.version() == 0);
    // A chunked ground truth is always the enumeration form.
    Variant expect = (v == Variant::kV5) ? Variant::kV4 : v;
    CHECK(result.catalog.variant() == expect);
    CHECK(!result.new_objects.empty());
    Digest d = f.commit(std::move(result));
    CHECK(f.rebuild(d) == data);
  }
}

TEST_CASE("empty data publishes an empty version") {
  for (Variant v : {Variant::kV5, Variant::kV1}) {
    PubFixture f;
    PublishResult result = make_ground_truth(f.base, 0, {}, f.params(v), f.key);
    CHECK(result.new_objects.empty());
    Digest d = f.commit(std::move(result));
    CHECK(f.rebuild(d).empty());
  }
}

TEST_CASE("diff chains round trip for every diff variant") {
  for (Variant v : {Variant::kV1, Variant::kV2, Variant::kV3, Variant::kV5}) {
    PubFixture f;
    std::mt19937_64 rng(static_cast<std::uint64_t>(v) + 100);
    auto data = test::rng_bytes(60000, 11);
    Digest head = f.commit(make_ground_truth(f.base, 0, data, f.params(v), f.key));
    std::vector<std::pair<Digest, std::vector<std::uint8_t>>> versions{{head, data}};

    for (std::uint64_t version = 1; version <= 4; ++version) {
      data = test::mutate(std::move(data), rng);
      head = f.commit(make_diff_version(f.tree, store_source(f.store), {head}, f.base, version,
                                        data, f.params(v), f.key));
      versions.emplace_back(head, data);
    }
    for (const auto& [digest, expected] : versions) CHECK(f.rebuild(digest) == expected);
  }
}

TEST_CASE("identity diffs carry no payload objects") {
  auto data = test::rng_bytes(50000, 21);
  for (Variant v : {Variant::kV1, Variant::kV2, Variant::kV3, Variant::kV5}) {
    PubFixture f;
    Digest parent = f.commit(make_ground_truth(f.base, 0, data, f.params(v), f.key));
    PublishResult diff =
        make_diff_version(f.tree, store_source(f.store), {parent}, f.base, 1, data,
                          f.params(v), f.key);
    CHECK(diff.new_objects.empty());
    switch (v) {
      case Variant::kV1:
        CHECK(std::get<V1Body>(diff.catalog.body).segments.empty());
        break;
      case Variant::kV2:
        CHECK(std::get<V2Body>(diff.catalog.body).replacements.empty());
        break;
      case Variant::kV3:
        CHECK(std::get<V3Body>(diff.catalog.body).segments.empty());
        break;
      default: {
        const auto& ops = std::get<V5Body>(diff.catalog.body).ops;
        REQUIRE(ops.size() == 1);
        CHECK(ops[0].kind == SeqOpKind::kKeepRun);
        break;
      }
    }
    Digest d = f.commit(std::move(diff));
    CHECK(f.rebuild(d) == data);
  }
}

TEST_CASE("a localized edit ships only nearby chunks") {
  PubFixture f;
  auto data = test::rng_bytes(1 << 20, 31);
  Digest parent = f.commit(make_ground_truth(f.base, 0, data, f.params(Variant::kV5), f.key));

  auto edited = data;
  auto patch = test::rng_bytes(1024, 32);
  std::copy(patch.begin(), patch.end(), edited.begin() + 300000);
  PublishResult diff = make_diff_version(f.tree, store_source(f.store), {parent}, f.base, 1,
                                         edited, f.params(Variant::kV5), f.key);
  CHECK(diff.new_objects.size() <= 5);
  std::uint64_t encoded_bytes = 0;
  for (const ContentObject& o : diff.new_objects) encoded_bytes += canonical_encode(o).size();
  CHECK(encoded_bytes <= 5 * (16384 + 200));
  Digest d = f.commit(std::move(diff));
  CHECK(f.rebuild(d) == edited);
}

TEST_CASE("byte scripts fragment into bounded diff segments") {
  PubFixture f;
  auto data = test::rng_bytes(200000, 41);
  PublishParams p = f.params(Variant::kV1);
  Digest parent = f.commit(make_ground_truth(f.base, 0, data, p, f.key));

  auto edited = data;
  auto patch = test::rng_bytes(50000, 42);
  std::copy(patch.begin(), patch.end(), edited.begin() + 100000);
  PublishResult diff =
      make_diff_version(f.tree, store_source(f.store), {parent}, f.base, 1, edited, p, f.key);

  const auto& body = std::get<V1Body>(diff.catalog.body);
  REQUIRE(body.segments.size() == diff.new_objects.size());
  REQUIRE(diff.new_objects.size() >= 50000 / p.segment_size);
  std::vector<std::uint8_t> script_bytes;
  for (std::size_t i = 0; i < diff.new_objects.size(); ++i) {
    const ContentObject& o = diff.new_objects[i];
    CHECK(o.kind == PayloadKind::kDiffSegment);
    CHECK(o.payload.size() <= p.segment_size);
    CHECK(object_digest(o) == body.segments[i]);
    script_bytes.insert(script_bytes.end(), o.payload.begin(), o.payload.end());
  }
  // The fragments reassemble into one well-formed edit script.
  ByteEditScript script = decode_byte_script(script_bytes);
  CHECK(byte_apply(data, script) == edited);
  Digest d = f.commit(std::move(diff));
  CHECK(f.rebuild(d) == edited);
}

TEST_CASE("single-op diffs split under the object size cap") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV3);
  p.chunk = ChunkParams{64, 128, 256};
  p.segment_size = 512;
  p.max_object_size = 1000;
  auto data = test::rng_bytes(20000, 51);
  Digest parent = f.commit(make_ground_truth(f.base, 0, data, p, f.key));

  auto edited = data;
  auto patch = test::rng_bytes(5000, 52);
  std::copy(patch.begin(), patch.end(), edited.begin() + 7000);
  PublishResult diff =
      make_diff_version(f.tree, store_source(f.store), {parent}, f.base, 1, edited, p, f.key);

  REQUIRE(diff.new_objects.size() >= 5);  // 5000 payload bytes over <1000-byte ops
  for (const ContentObject& o : diff.new_objects) {
    CHECK(o.payload.size() <= p.max_object_size);
    CHECK_NOTHROW(decode_byte_op(o.payload));
  }
  // The first piece keeps the replaced range; continuations insert after it.
  ByteEditOp first = decode_byte_op(diff.new_objects[0].payload);
  ByteEditOp second = decode_byte_op(diff.new_objects[1].payload);
  CHECK(first.kind == ByteOpKind::kReplace);
  CHECK(second.kind == ByteOpKind::kInsert);
  CHECK(second.old_offset == first.old_offset + first.old_len);
  Digest d = f.commit(std::move(diff));
  CHECK(f.rebuild(d) == edited);
}

TEST_CASE("shrinking replacement versions blank the dead tail") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV2);
  auto data = test::rng_bytes(5 * p.segment_size + 100, 61);  // segments 0..5
  Digest v0 = f.commit(make_ground_truth(f.base, 0, data, p, f.key));

  std::vector<std::uint8_t> shorter(data.begin(),
                                    data.begin() + static_cast<std::ptrdiff_t>(2 * p.segment_size));
  PublishResult diff1 =
      make_diff_version(f.tree, store_source(f.store), {v0}, f.base, 1, shorter, p, f.key);
  const auto& body1 = std::get<V2Body>(diff1.catalog.body);
  REQUIRE(body1.replacements.size() == 4);  // numbers 2..5 re-emitted empty
  std::set<std::uint64_t> numbers;
  for (const auto& [number, digest] : body1.replacements) numbers.insert(number);
  CHECK(numbers == std::set<std::uint64_t>{2, 3, 4, 5});
  for (const ContentObject& o : diff1.new_objects) CHECK(o.payload.empty());
  Digest v1 = f.commit(std::move(diff1));
  CHECK(f.rebuild(v1) == shorter);
  CHECK(f.tree.resolve_segments(v1).size() == 6);

  // Shrinking again only re-emits the newly dead number; the already-empty
  // tail stays elided.
  std::vector<std::uint8_t> shortest(shorter.begin(),
                                     shorter.begin() + static_cast<std::ptrdiff_t>(p.segment_size));
  PublishResult diff2 =
      make_diff_version(f.tree, store_source(f.store), {v1}, f.base, 2, shortest, p, f.key);
  const auto& body2 = std::get<V2Body>(diff2.catalog.body);
  REQUIRE(body2.replacements.size() == 1);
  CHECK(body2.replacements[0].first == 1);
  Digest v2 = f.commit(std::move(diff2));
  CHECK(f.rebuild(v2) == shortest);
}

TEST_CASE("replacement diffs emit each segment number once") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV2);
  std::mt19937_64 rng(71);
  auto data = test::rng_bytes(90000, 72);
  Digest head = f.commit(make_ground_truth(f.base, 0, data, p, f.key));
  for (std::uint64_t version = 1; version <= 3; ++version) {
    data = test::mutate(std::move(data), rng, 20000);
    PublishResult diff =
        make_diff_version(f.tree, store_source(f.store), {head}, f.base, version, data, p, f.key);
    const auto& body = std::get<V2Body>(diff.catalog.body);
    std::set<std::uint64_t> numbers;
    for (const auto& [number, digest] : body.replacements) {
      CHECK(numbers.insert(number).second);
    }
    head = f.commit(std::move(diff));
    CHECK(f.rebuild(head) == data);
  }
}

TEST_CASE("publisher numbers versions and consolidates by depth") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV5);
  p.consolidate_depth = 3;
  p.consolidate_payload_ratio = 10.0;  // depth policy only in this case
  Publisher publisher(f.store, f.tree, f.key, f.base, p);

  std::mt19937_64 rng(81);
  auto data = test::rng_bytes(200000, 82);
  std::vector<Publisher::Info> infos;
  std::vector<std::vector<std::uint8_t>> expected;
  for (int i = 0; i < 7; ++i) {
    if (i > 0) data = test::mutate(std::move(data), rng, 64);
    infos.push_back(publisher.publish(data));
    expected.push_back(data);
  }
  for (std::size_t i = 0; i < infos.size(); ++i) {
    CHECK(infos[i].version == i);
    bool want_truth = (i % 3 == 0);  // depth cap 3 resets the spine at 0, 3, 6
    CHECK(infos[i].ground_truth == want_truth);
    CHECK(f.rebuild(infos[i].catalog_digest) == expected[i]);
  }
  CHECK(publisher.next_version() == 7);
  REQUIRE(publisher.head().has_value());
  CHECK(*publisher.head() == infos.back().catalog_digest);
}

TEST_CASE("a large rewrite forces a fresh ground truth") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV5);
  p.consolidate_depth = 99;
  p.consolidate_payload_ratio = 0.5;
  Publisher publisher(f.store, f.tree, f.key, f.base, p);

  auto v0 = test::rng_bytes(100000, 91);
  CHECK(publisher.publish(v0).ground_truth);

  auto rewrite = test::rng_bytes(100000, 92);  // unrelated content
  Publisher::Info info1 = publisher.publish(rewrite);
  CHECK(info1.ground_truth);

  auto nudged = rewrite;
  nudged[500] ^= 0xff;
  Publisher::Info info2 = publisher.publish(nudged);
  CHECK(!info2.ground_truth);
  CHECK(f.rebuild(info2.catalog_digest) == nudged);
}

TEST_CASE("republishing unchanged data moves no payload bytes") {
  PubFixture f;
  Publisher publisher(f.store, f.tree, f.key, f.base, f.params(Variant::kV5));
  auto data = test::rng_bytes(80000, 95);
  publisher.publish(data);
  Publisher::Info again = publisher.publish(data);
  CHECK(again.new_objects == 0);
  CHECK(again.new_object_bytes == 0);
  CHECK(f.rebuild(again.catalog_digest) == data);
}

TEST_CASE("enumeration publisher deduplicates against the store") {
  PubFixture f;
  Publisher publisher(f.store, f.tree, f.key, f.base, f.params(Variant::kV4));
  auto data = test::rng_bytes(200000, 101);
  Publisher::Info info0 = publisher.publish(data);
  CHECK(info0.ground_truth);
  CHECK(info0.new_objects > 10);

  auto edited = data;
  auto patch = test::rng_bytes(100, 102);
  std::copy(patch.begin(), patch.end(), edited.begin() + 50000);
  Publisher::Info info1 = publisher.publish(edited);
  CHECK(info1.ground_truth);  // enumeration versions are always full listings
  CHECK(info1.new_objects <= 4);
  CHECK(f.rebuild(info1.catalog_digest) == edited);
}

TEST_CASE("publisher resumes from persisted store and tree") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV5);
  p.consolidate_payload_ratio = 10.0;  // keep every post-v0 version a diff
  std::mt19937_64 rng(111);
  auto data = test::rng_bytes(60000, 112);
  Digest head;
  {
    Publisher publisher(f.store, f.tree, f.key, f.base, p);
    for (int i = 0; i < 3; ++i) {
      if (i > 0) data = test::mutate(std::move(data), rng);
      head = publisher.publish(data).catalog_digest;
    }
  }
  Publisher resumed(f.store, f.tree, f.key, f.base, p);
  CHECK(resumed.next_version() == 3);
  REQUIRE(resumed.head().has_value());
  CHECK(*resumed.head() == head);

  data = test::mutate(std::move(data), rng);
  Publisher::Info info = resumed.publish(data);
  CHECK(info.version == 3);
  CHECK(f.tree.at(info.catalog_digest).parents.back() == head);
  CHECK(f.rebuild(info.catalog_digest) == data);
}

TEST_CASE("the known filter drops already-held objects") {
  PubFixture f;
  auto data = test::rng_bytes(60000, 121);
  PublishResult all = make_ground_truth(f.base, 0, data, f.params(Variant::kV5), f.key);
  CHECK(!all.new_objects.empty());
  PublishResult none = make_ground_truth(f.base, 0, data, f.params(Variant::kV5), f.key,
                                         [](const Digest&) { return true; });
  CHECK(none.new_objects.empty());
  // The catalog is identical either way; only the shipped object set shrinks.
  CHECK(canonical_encode(all.catalog) == canonical_encode(none.catalog));
}

TEST_CASE("diff requests that cannot work are refused") {
  PubFixture f;
  auto data = test::rng_bytes(10000, 131);
  Digest parent = f.commit(make_ground_truth(f.base, 0, data, f.params(Variant::kV5), f.key));

  CHECK_THROWS_AS(make_diff_version(f.tree, store_source(f.store), {parent}, f.base, 1, data,
                                    f.params(Variant::kV4), f.key),
                  BodyError);
  CHECK_THROWS_AS(make_diff_version(f.tree, store_source(f.store), {}, f.base, 1, data,
                                    f.params(Variant::kV5), f.key),
                  BodyError);
  Digest unknown = sha256(test::rng_bytes(4, 132));
  CHECK_THROWS_AS(make_diff_version(f.tree, store_source(f.store), {unknown}, f.base, 1, data,
                                    f.params(Variant::kV5), f.key),
                  DanglingParentError);
  // Byte-diff variants take exactly one parent.
  CHECK_THROWS_AS(make_diff_version(f.tree, store_source(f.store), {parent, parent}, f.base, 1,
                                    data, f.params(Variant::kV1), f.key),
                  BodyError);
}

TEST_CASE("publish params validate") {
  PubFixture f;
  PublishParams p;
  p.segment_size = 0;
  CHECK_THROWS_AS(p.validate(), SizeError);
  p = PublishParams{};
  p.segment_size = p.max_object_size + 1;
  CHECK_THROWS_AS(p.validate(), SizeError);
  p = PublishParams{};
  p.chunk.max_size = p.max_object_size + 1;
  CHECK_THROWS_AS(p.validate(), SizeError);
  p = PublishParams{};
  p.consolidate_depth = 0;
  CHECK_THROWS_AS(p.validate(), SizeError);
  p = PublishParams{};
  p.consolidate_payload_ratio = 0.0;
  CHECK_THROWS_AS(p.validate(), SizeError);
  CHECK_NOTHROW(PublishParams{}.validate());
}

TEST_CASE("a chunk prefix override names chunks under the prefix") {
  PubFixture f;
  PublishParams p = f.params(Variant::kV5);
  p.chunk_prefix = HierarchicalName({"cdn", "chunks"});
  auto data = test::rng_bytes(50000, 141);
  PublishResult result = make_ground_truth(f.base, 0, data, p, f.key);
  const auto& body = std::get<V4Body>(result.catalog.body);
  CHECK(body.chunk_prefix == *p.chunk_prefix);
  for (const ContentObject& o : result.new_objects) {
    REQUIRE(o.name.components().size() == 3);
    CHECK(o.name.components()[0] == "cdn");
    CHECK(o.name.components()[1] == "chunks");
    CHECK(o.kind == PayloadKind::kChunk);
  }
  Digest d = f.commit(std::move(result));
  CHECK(f.rebuild(d) == data);
}

}  // TEST_SUITE
