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

#ifndef PKSE_PAILLIER_H_
#define PKSE_PAILLIER_H_

#include <gmpxx.h>

#include <cstdint>

#include "pkse/random.h"
#include "pkse/residue_math.h"

namespace pkse {

// Paillier with generator g = n + 1.
struct PublicKey {
  mpz_class n;
  mpz_class g;
  mpz_class n_squared;

  Modulus modulus() const { return Modulus(n); }
  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct SecretKey {
  mpz_class p;
  mpz_class q;
  mpz_class lambda;  // lcm(p - 1, q - 1)
  mpz_class mu;      // L(g^lambda mod n^2)^-1 mod n
  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

struct Keypair {
  PublicKey pk;
  SecretKey sk;
  unsigned bits = 0;  // bit length of each prime
  friend bool operator==(const Keypair&, const Keypair&) = default;
};

class Ciphertext {
 public:
  Ciphertext(mpz_class value, mpz_class n)
      : value_(std::move(value)), n_(std::move(n)) {}

  const mpz_class& value() const { return value_; }
  const mpz_class& n() const { return n_; }

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;

 private:
  mpz_class value_;
  mpz_class n_;
};

// Two distinct `bits`-bit primes drawn from a seeded stream. Throws
// kParameterTooSmall when bits < 3.
Keypair KeyGen(unsigned bits, std::uint64_t seed);
// Key for explicitly chosen primes (fixture reproduction).
Keypair KeyFromPrimes(const mpz_class& p, const mpz_class& q);

// m may be negative; anything in (-n, n) is canonicalized mod n. Values
// outside that window throw kPlaintextOutOfRange.
Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng);
Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m,
                   std::uint64_t seed);

// Returns the canonical plaintext in [0, n). Throws kInvalidCiphertext when
// the value shares a factor with n^2 or lies outside [0, n^2), and
// kModulusMismatch for a ciphertext under another key.
Residue Decrypt(const Keypair& key, const Ciphertext& c);

Ciphertext HomAdd(const Ciphertext& a, const Ciphertext& b);
Ciphertext ScalarMul(const Ciphertext& a, const mpz_class& s);

}  // namespace pkse

#endif  // PKSE_PAILLIER_H_
