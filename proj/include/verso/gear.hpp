// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace verso {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::array<std::uint64_t, 256> make_gear_table() {
  std::array<std::uint64_t, 256> table{};
  std::uint64_t state = 0xdbc17a7b1e5eed42ULL;
  for (std::uint64_t& entry : table) entry = splitmix64(state);
  return table;
}

}  // namespace detail

// Per-byte randomization table for the gear rolling hash. Fixed for all
// time: changing it changes every chunk boundary and therefore every chunk
// id, so the table doubles as a format constant. A binary copy ships in
// assets/gear_table.bin for non-C++ implementations.
inline constexpr std::array<std::uint64_t, 256> kGearTable = detail::make_gear_table();

// One gear step: shift ages the window out (a byte influences at most 64
// steps), the table entry mixes the new byte in.
constexpr std::uint64_t gear_step(std::uint64_t hash, std::uint8_t byte) {
  return (hash << 1) + kGearTable[byte];
}

}  // namespace verso
