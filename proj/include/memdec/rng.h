// Copyright 2026 The memdec Authors
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

#ifndef MEMDEC_RNG_H
#define MEMDEC_RNG_H

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace memdec {

/// Stateless splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a parent seed and a path of indices.
///
/// Every random stream in the project is keyed this way, e.g. a dataset shot uses
/// derive_seed(seed, {p_index, shot_index}). Two different paths give independent streams
/// and the result does not depend on which thread asks for it.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

/// Stream tags for the first element of a derivation path.
namespace stream {
inline constexpr std::uint64_t kTrainData = 0x7472;
inline constexpr std::uint64_t kValData = 0x7661;
inline constexpr std::uint64_t kTestData = 0x7465;
inline constexpr std::uint64_t kFpTraining = 0x6670;
inline constexpr std::uint64_t kRetraining = 0x7277;
inline constexpr std::uint64_t kDeviceFaults = 0x6466;
inline constexpr std::uint64_t kInference = 0x696e;
}  // namespace stream

/// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// True with probability p.
    bool bernoulli(double p) {
        return uniform() < p;
    }

    /// Uniform integer in [0, n).
    std::uint32_t below(std::uint32_t n);

   private:
    std::uint64_t s_[4];
};

}  // namespace memdec

#endif
