// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace verso {

// CCNx-style hierarchical name: ordered byte-string components plus an
// optional version and segment, e.g. /wiki/lab/drafts.doc/v0/s0.
//
// Text form: components are joined with '/'; bytes outside the printable
// ASCII range (and '%' and '/') are percent-escaped. A trailing v<N> parses
// as the version and a trailing v<N>/s<M> as version+segment. Because of
// that, a name WITHOUT a version whose last plain component looks like
// v<N> or s<N> cannot round-trip through text and is rejected at
// construction.
class HierarchicalName {
 public:
  HierarchicalName() = default;
  HierarchicalName(std::vector<std::string> components,
                   std::optional<std::uint64_t> version = std::nullopt,
                   std::optional<std::uint64_t> segment = std::nullopt);

  // Parses a '/'-separated text name. Throws NameParseError on empty
  // components, segment-before-version, malformed integers or escapes.
  static HierarchicalName parse(std::string_view text);

  std::string render() const;

  const std::vector<std::string>& components() const { return components_; }
  std::optional<std::uint64_t> version() const { return version_; }
  std::optional<std::uint64_t> segment() const { return segment_; }

  HierarchicalName with_version(std::uint64_t v) const;
  HierarchicalName with_segment(std::uint64_t s) const;  // requires a version
  HierarchicalName with_component(std::string component) const;  // appended last
  HierarchicalName base() const;  // components only, no version/segment

  // Component-wise lexicographic order; versions and segments compare
  // numerically, absent before present.
  std::strong_ordering operator<=>(const HierarchicalName& other) const;
  bool operator==(const HierarchicalName& other) const = default;

 private:
  std::vector<std::string> components_;
  std::optional<std::uint64_t> version_;
  std::optional<std::uint64_t> segment_;
};

}  // namespace verso
