// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bitalloc {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to decorrelate neighbouring seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Seed of the named substream ("swarm", "channel", "data", ...) derived
/// from one experiment seed. Distinct names give independent streams, so
/// drawing more channel samples never shifts the swarm's draws.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view name);

}  // namespace bitalloc
