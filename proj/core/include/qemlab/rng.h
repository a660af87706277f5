// Copyright 2026 The qemlab Authors
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

#ifndef QEMLAB_RNG_H
#define QEMLAB_RNG_H

#include <cstdint>
#include <random>

namespace qemlab {

/// Stable 64-bit mixing of (seed, index), used to derive per-item seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Mersenne twister with distribution code kept in-house, so streams are identical across
/// standard library implementations (std::uniform_real_distribution et al. are not).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {
    }

    std::uint64_t next_u64() {
        return engine_();
    }
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }
    /// Uniform integer in [0, n). `n` must be positive.
    std::uint64_t below(std::uint64_t n);
    double normal();

   private:
    std::mt19937_64 engine_;
};

}  // namespace qemlab

#endif
