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

#include "pkse/paillier.h"

#include <set>

#include "doctest.h"
#include "pkse/error.h"

namespace pkse {
namespace {

const Keypair& Toy() {
  static const Keypair key = KeyFromPrimes(11, 13);
  return key;
}

TEST_CASE("Key generation") {
  CHECK(Toy().pk.n == 143);
  CHECK(Toy().pk.g == 144);
  CHECK(Toy().sk.lambda == 60);

  CHECK(KeyGen(4, 3) == KeyGen(4, 3));
  // 11 and 13 are the only 4-bit primes.
  const Keypair four = KeyGen(4, 99);
  CHECK(four.pk.n == 143);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Keypair key = KeyGen(32, seed);
    const auto bits = mpz_sizeinbase(key.pk.n.get_mpz_t(), 2);
    CHECK((bits == 63 || bits == 64));
    CHECK(mpz_sizeinbase(key.sk.p.get_mpz_t(), 2) == 32);
    CHECK(mpz_sizeinbase(key.sk.q.get_mpz_t(), 2) == 32);
    CHECK(key.sk.p != key.sk.q);
  }
  CHECK_THROWS_AS(KeyGen(2, 1), Error);
  CHECK_NOTHROW(KeyGen(3, 1));
}

TEST_CASE("Encrypt and decrypt") {
  const Keypair& key = Toy();
  CHECK(Decrypt(key, Encrypt(key.pk, 0, 1)) == 0);
  CHECK(Decrypt(key, Encrypt(key.pk, 42, 1)) == 42);
  CHECK(Decrypt(key, Encrypt(key.pk, -70, 1)) == 73);
  // r^n mod n^2 depends only on r mod n, so the toy key has 120 distinct
  // encryptions of each plaintext.
  std::set<mpz_class> seen;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Ciphertext c = Encrypt(key.pk, 42, seed);
    CHECK(Decrypt(key, c) == 42);
    seen.insert(c.value());
  }
  CHECK(seen.size() > 1);

  CHECK_THROWS_AS(Encrypt(key.pk, 143, 1), Error);
  CHECK_THROWS_AS(Encrypt(key.pk, -143, 1), Error);
}

TEST_CASE("Round trip on random plaintexts at both sizes") {
  for (const Keypair& key : {Toy(), KeyGen(32, 5)}) {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
      const mpz_class m = rng.Below(key.pk.n);
      CHECK(Decrypt(key, Encrypt(key.pk, m, rng)) == m);
    }
  }
}

TEST_CASE("Probabilistic encryption") {
  const Keypair key = KeyGen(32, 8);
  Rng rng(23);
  std::set<mpz_class> seen;
  for (int i = 0; i < 100; ++i) seen.insert(Encrypt(key.pk, 42, rng).value());
  CHECK(seen.size() == 100);
}

TEST_CASE("Decrypt rejects invalid ciphertexts") {
  const Keypair& key = Toy();
  try {
    Decrypt(key, Ciphertext(143, 143));
    FAIL("expected InvalidCiphertext");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidCiphertext);
  }
  CHECK_THROWS_AS(Decrypt(key, Ciphertext(0, 143)), Error);
  CHECK_THROWS_AS(Decrypt(key, Ciphertext(143 * 143 + 1, 143)), Error);
  CHECK_THROWS_AS(Decrypt(key, Ciphertext(2, 35)), Error);
}

TEST_CASE("Homomorphic addition") {
  const Keypair& key = Toy();
  const auto& pk = key.pk;
  CHECK(Decrypt(key, HomAdd(Encrypt(pk, 5, 1), Encrypt(pk, 7, 2))) == 12);
  CHECK(Decrypt(key, HomAdd(Encrypt(pk, 99, 1), Encrypt(pk, 0, 2))) == 99);
  // (140 + 5) mod 143.
  CHECK(Decrypt(key, HomAdd(Encrypt(pk, 140, 1), Encrypt(pk, 5, 2))) == 2);
  // Enc(V_1) +_h Enc(-2 r1 r2) at r1 = 5, r2 = 7: 46 - 70 = -24.
  CHECK(Decrypt(key, HomAdd(Encrypt(pk, 46, 1), Encrypt(pk, -70, 2))) ==
        143 - 24);
  CHECK_THROWS_AS(HomAdd(Encrypt(pk, 1, 1), Ciphertext(4, 35)), Error);
}

TEST_CASE("Scalar multiplication") {
  const Keypair& key = Toy();
  const auto& pk = key.pk;
  CHECK(Decrypt(key, ScalarMul(Encrypt(pk, 77, 1), 1)) == 77);
  CHECK(Decrypt(key, ScalarMul(Encrypt(pk, 77, 1), 0)) == 0);
  CHECK(Decrypt(key, ScalarMul(Encrypt(pk, 6, 1), 8)) == 48);
  CHECK(Decrypt(key, ScalarMul(Encrypt(pk, 6, 1), -1)) == 137);
}

TEST_CASE("Homomorphism properties on random inputs") {
  for (const Keypair& key : {Toy(), KeyGen(32, 6)}) {
    const mpz_class& n = key.pk.n;
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
      const mpz_class a = rng.Below(n), b = rng.Below(n), s = rng.Below(n);
      const Ciphertext ca = Encrypt(key.pk, a, rng);
      CHECK(Decrypt(key, HomAdd(ca, Encrypt(key.pk, b, rng))) == (a + b) % n);
      CHECK(Decrypt(key, ScalarMul(ca, s)) == (a * s) % n);
    }
  }
}

}  // namespace
}  // namespace pkse
