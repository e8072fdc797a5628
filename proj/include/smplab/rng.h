// Copyright 2026 The smplab Authors
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

#ifndef SMPLAB_RNG_H
#define SMPLAB_RNG_H

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace smplab {

/// Mixes (seed, index) into a fresh 64-bit seed. Used for trial streams and sweep sub-runs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Random stream keyed by (seed, stream index).
///
/// Two Rng values built from the same key produce the same sequence regardless of
/// which thread builds them or in which order, so trial t of a Monte-Carlo run only
/// depends on (seed, t). All derived quantities (uniform doubles, bounded integers,
/// shuffles) are computed here from raw 64-bit words rather than through the
/// standard distributions, whose outputs are implementation-defined.
class Rng {
   public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p);
    /// Standard normal via Box-Muller.
    double normal();
    /// Index drawn with probability proportional to weights.
    std::size_t weighted(std::span<const double> weights);

    template <typename T>
    void shuffle(std::vector<T> &items) {
        for (std::size_t k = items.size(); k > 1; k--) {
            std::size_t j = static_cast<std::size_t>(below(k));
            std::swap(items[k - 1], items[j]);
        }
    }

    /// Uniformly random subset of [0, n) of the given size, in selection order.
    std::vector<std::uint32_t> subset(std::uint32_t n, std::uint32_t size);

   private:
    std::mt19937_64 engine_;
};

struct Interval {
    double low;
    double high;
    double half_width() const {
        return (high - low) / 2;
    }
};

/// Wilson score interval for a binomial proportion at the given z (default: 95%).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

}  // namespace smplab

#endif
