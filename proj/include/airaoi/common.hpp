// Copyright 2026 The airaoi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace airaoi {

/// Deterministic generator used everywhere a random draw is needed.
using Rng = std::mt19937_64;

/// Per-device selection indicator (1 = selected).
using Mask = std::vector<std::uint8_t>;

/// Raised when an input makes a closed-form expression undefined
/// (all-zero amplitudes, zero variance, ...).
class DegenerateError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when the multiplier search cannot bracket the budget root.
class BisectionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised on invalid configuration documents.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Fixed stream offsets. Every concern draws from its own generator so that
// policies compared under one master seed see identical channels and times.
enum class Stream : std::uint64_t {
    kChannel = 1,
    kResource = 2,
    kData = 3,
    kSelection = 4,
    kNoise = 5,
    kSgd = 6,
    kInit = 7,
    kReplication = 8,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a master seed with a stream id and up to two coordinates.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t a = 0,
                          std::uint64_t b = 0);

Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0);

Mask mask_from_indices(std::size_t n, const std::vector<std::size_t>& indices);
std::vector<std::size_t> indices_from_mask(const Mask& mask);

}  // namespace airaoi
