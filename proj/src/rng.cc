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

#include "smplab/rng.h"

#include <cmath>
#include <numbers>

#include "smplab/errors.h"

namespace smplab {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t a = mix64(seed);
    std::uint64_t b = mix64(a ^ mix64(stream + 0x632BE59BD9B4E019ULL));
    std::seed_seq seq{
        static_cast<std::uint32_t>(a),
        static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b),
        static_cast<std::uint32_t>(b >> 32),
    };
    return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(~index));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(make_engine(seed, stream)) {
}

std::uint64_t Rng::next_u64() {
    return engine_();
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw InvalidArgument("Rng::below(0)");
    }
    // Rejection on the top of the range keeps the result exactly uniform.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    while (true) {
        std::uint64_t v = next_u64();
        if (v < limit) {
            return v % n;
        }
    }
}

bool Rng::bernoulli(double p) {
    if (p >= 1) {
        return true;
    }
    if (p <= 0) {
        return false;
    }
    return uniform() < p;
}

double Rng::normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

std::size_t Rng::weighted(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) {
        total += w;
    }
    double u = uniform() * total;
    double acc = 0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < weights.size(); k++) {
        if (weights[k] <= 0) {
            continue;
        }
        last_positive = k;
        acc += weights[k];
        if (u < acc) {
            return k;
        }
    }
    return last_positive;
}

std::vector<std::uint32_t> Rng::subset(std::uint32_t n, std::uint32_t size) {
    if (size > n) {
        throw InvalidArgument("subset size exceeds universe");
    }
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t k = 0; k < n; k++) {
        pool[k] = k;
    }
    for (std::uint32_t k = 0; k < size; k++) {
        std::uint32_t j = k + static_cast<std::uint32_t>(below(n - k));
        std::swap(pool[k], pool[j]);
    }
    pool.resize(size);
    return pool;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        return {0, 1};
    }
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace smplab
