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

#include "pkse/random.h"

#include <cassert>
#include <climits>


namespace pkse {

static_assert(sizeof(unsigned long) * CHAR_BIT == 64,
              "Rng assumes 64-bit unsigned long for mpz conversion");

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index) {
  return Mix64(Mix64(base) ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

mpz_class Rng::Below(const mpz_class& bound) {
  assert(bound > 0);
  if (bound == 1) return 0;
  const mpz_class top = bound - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  // Rejection sampling on the smallest covering bit width.
  for (;;) {
    mpz_class candidate = 0;
    std::size_t filled = 0;
    while (filled < bits) {
      candidate <<= 64;
      candidate += mpz_class(static_cast<unsigned long>(engine_()));
      filled += 64;
    }
    candidate >>= static_cast<mp_bitcnt_t>(filled - bits);
    if (candidate < bound) return candidate;
  }
}

mpz_class Rng::InRange(const mpz_class& lo, const mpz_class& hi) {
  assert(lo <= hi);
  return lo + Below(hi - lo + 1);
}

mpz_class Rng::WithBits(unsigned bits) {
  assert(bits >= 1);
  mpz_class base = 1;
  base <<= bits - 1;
  return base + Below(base);
}

}  // namespace pkse
