/*
 * Copyright 2026 The pkse Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PKSE_RANDOM_H_
#define PKSE_RANDOM_H_

#include <gmpxx.h>

#include <cstdint>
#include <random>

namespace pkse {

// SplitMix64 finalizer. Used to derive independent per-trial seeds and as the
// keyed round function of the tag permutation.
std::uint64_t Mix64(std::uint64_t x);

// Derives the seed of the `index`-th independent stream under `base`.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index);

// Seeded source of big-integer randomness. Output depends only on the seed
// (mt19937_64 is fully specified by the standard), so every run is
// reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  mpz_class Below(const mpz_class& bound);

  // Uniform in [lo, hi].
  mpz_class InRange(const mpz_class& lo, const mpz_class& hi);

  // Uniform odd-or-even integer with exactly `bits` bits (top bit set).
  mpz_class WithBits(unsigned bits);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pkse

#endif  // PKSE_RANDOM_H_
