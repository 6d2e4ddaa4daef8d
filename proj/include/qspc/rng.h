// Copyright 2026 The qspc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>

namespace qspc {

/// SplitMix64 finalizer.
constexpr uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream. Output n is mix64(key + n * golden), so two
/// streams with different keys never share state and draws can be made in any
/// order across threads.
class KeyedStream {
   public:
    using result_type = uint64_t;

    explicit KeyedStream(uint64_t key) : key_(key) {
    }

    /// Key derived from (seed, circuit, replicate, gate).
    static KeyedStream derive(uint64_t seed, uint64_t circuit, uint64_t replicate, uint64_t gate) {
        uint64_t k = mix64(seed ^ 0x71C5A3E3D2F1B9A7ULL);
        k = mix64(k ^ circuit);
        k = mix64(k ^ (replicate * 0xD6E8FEB86659FD93ULL));
        k = mix64(k ^ (gate * 0xA0761D6478BD642FULL));
        return KeyedStream(k);
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint64_t>::max();
    }

    result_type operator()() {
        return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return double((*this)() >> 11) * 0x1.0p-53;
    }

    uint64_t key() const {
        return key_;
    }

   private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

/// Gate index reserved for the shot-sampling stream of a circuit.
constexpr uint64_t kShotStreamGate = ~uint64_t{0};

}  // namespace qspc
