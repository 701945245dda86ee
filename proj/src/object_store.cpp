// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/object_store.hpp"

#include <fstream>
#include <limits>
#include <string>
#include <system_error>

#include "verso/errors.hpp"

namespace fs = std::filesystem;

namespace verso {

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  return bytes;
}

EncodedKind kind_of_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  char header[2] = {};
  if (!in || !in.read(header, sizeof header)) {
    throw IoError("cannot read type header of " + path.string());
  }
  std::uint16_t type = static_cast<std::uint16_t>((static_cast<std::uint8_t>(header[0]) << 8) |
                                                  static_cast<std::uint8_t>(header[1]));
  switch (type) {
    case tlv::kContentObject: return EncodedKind::kContentObject;
    case tlv::kSecureCatalog: return EncodedKind::kCatalog;
    default: throw DecodeError(path.string() + " is not a stored object");
  }
}

}  // namespace

ObjectStore::ObjectStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "objects", ec);
  if (ec) throw IoError("cannot create store at " + root_.string() + ": " + ec.message());
  fs::create_directories(root_ / "tmp", ec);
  if (ec) throw IoError("cannot create store at " + root_.string() + ": " + ec.message());
  scan();
}

void ObjectStore::scan() {
  index_.clear();
  for (const auto& shard : fs::directory_iterator(root_ / "objects")) {
    if (!shard.is_directory()) continue;
    std::string prefix = shard.path().filename().string();
    for (const auto& file : fs::directory_iterator(shard.path())) {
      if (!file.is_regular_file()) continue;
      std::string hex = prefix + file.path().filename().string();
      if (hex.size() != Digest::kSize * 2) continue;
      Digest digest;
      try {
        digest = Digest::from_hex(hex);
      } catch (const DecodeError&) {
        continue;  // stray file, not ours
      }
      index_[digest] = Entry{kind_of_file(file.path()),
                             static_cast<std::uint64_t>(file.file_size())};
    }
  }
}

fs::path ObjectStore::object_path(const Digest& digest) const {
  std::string hex = digest.hex();
  return root_ / "objects" / hex.substr(0, 2) / hex.substr(2);
}

ObjectStore::PutResult ObjectStore::put(std::span<const std::uint8_t> encoded) {
  EncodedKind kind = classify_encoded(encoded);
  Digest digest = sha256(encoded);
  if (index_.contains(digest)) return {digest, false};

  fs::path target = object_path(digest);
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw IoError("cannot create shard dir: " + ec.message());

  fs::path tmp = root_ / "tmp" / (digest.hex() + ".part");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open temp file " + tmp.string());
    out.write(reinterpret_cast<const char*>(encoded.data()),
              static_cast<std::streamsize>(encoded.size()));
    if (!out) throw IoError("write failed on " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot store " + digest.hex() + ": " + ec.message());
  }
  index_[digest] = Entry{kind, encoded.size()};
  return {digest, true};
}

ObjectStore::PutResult ObjectStore::put(const ContentObject& object) {
  return put(canonical_encode(object, std::numeric_limits<std::uint64_t>::max()));
}

ObjectStore::PutResult ObjectStore::put(const SecureCatalog& catalog) {
  return put(canonical_encode(catalog));
}

std::vector<std::uint8_t> ObjectStore::get(const Digest& digest) const {
  if (!index_.contains(digest)) throw NotFoundError("object " + digest.hex() + " not in store");
  std::vector<std::uint8_t> bytes = read_file(object_path(digest));
  if (sha256(bytes) != digest) {
    throw IntegrityError("object " + digest.hex() + " fails its digest check on disk");
  }
  return bytes;
}

std::vector<Digest> ObjectStore::missing(std::span<const Digest> digests) const {
  std::vector<Digest> out;
  for (const Digest& d : digests) {
    if (!index_.contains(d)) out.push_back(d);
  }
  return out;
}

}  // namespace verso
