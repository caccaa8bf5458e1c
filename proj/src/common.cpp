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

#include "airaoi/common.hpp"

namespace airaoi {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
    s = splitmix64(s ^ a);
    return splitmix64(s ^ (b * 0x2545f4914f6cdd1dULL));
}

Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t a, std::uint64_t b) {
    return Rng(derive_seed(master, stream, a, b));
}

Mask mask_from_indices(std::size_t n, const std::vector<std::size_t>& indices) {
    Mask mask(n, 0);
    for (std::size_t i : indices) {
        if (i >= n) throw std::out_of_range("device index out of range");
        mask[i] = 1;
    }
    return mask;
}

std::vector<std::size_t> indices_from_mask(const Mask& mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) out.push_back(i);
    return out;
}

}  // namespace airaoi
