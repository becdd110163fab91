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

#include <algorithm>
#include <string>

#include "pkse/error.h"

namespace pkse {

namespace {

// Generous bound; k-bit primes have density about 1 / (k ln 2).
constexpr int kPrimeDrawsPerBit = 4096;

mpz_class RandomPrime(unsigned bits, Rng& rng, const mpz_class& avoid) {
  for (unsigned draw = 0; draw < kPrimeDrawsPerBit * bits; ++draw) {
    const mpz_class candidate = rng.WithBits(bits);
    if (candidate != avoid && IsProbablePrime(candidate, 64, rng.NextU64())) {
      return candidate;
    }
  }
  throw Error(ErrorCode::kRandomnessExhausted,
              "no " + std::to_string(bits) + "-bit prime found");
}

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

// L(u) = (u - 1) / n.
mpz_class LFunction(const mpz_class& u, const mpz_class& n) {
  return (u - 1) / n;
}

void CheckSameKey(const Ciphertext& a, const Ciphertext& b) {
  if (a.n() != b.n()) {
    throw Error(ErrorCode::kModulusMismatch,
                "ciphertexts under different moduli");
  }
}

}  // namespace

Keypair KeyFromPrimes(const mpz_class& p, const mpz_class& q) {
  const Modulus modulus(p, q);
  Keypair key;
  key.bits = static_cast<unsigned>(
      std::max(mpz_sizeinbase(p.get_mpz_t(), 2),
               mpz_sizeinbase(q.get_mpz_t(), 2)));
  key.pk.n = modulus.n();
  key.pk.g = key.pk.n + 1;
  key.pk.n_squared = key.pk.n * key.pk.n;
  key.sk.p = p;
  key.sk.q = q;
  mpz_lcm(key.sk.lambda.get_mpz_t(), mpz_class(p - 1).get_mpz_t(),
          mpz_class(q - 1).get_mpz_t());
  const mpz_class u = PowMod(key.pk.g, key.sk.lambda, key.pk.n_squared);
  key.sk.mu = ModInv(LFunction(u, key.pk.n), key.pk.n);
  return key;
}

Keypair KeyGen(unsigned bits, std::uint64_t seed) {
  if (bits < 3) {
    throw Error(ErrorCode::kParameterTooSmall,
                "prime bit length must be at least 3, got " +
                    std::to_string(bits));
  }
  Rng rng(seed);
  const mpz_class p = RandomPrime(bits, rng, 0);
  const mpz_class q = RandomPrime(bits, rng, p);
  Keypair key = KeyFromPrimes(p, q);
  key.bits = bits;
  return key;
}

Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m, Rng& rng) {
  if (m >= pk.n || m <= -pk.n) {
    throw Error(ErrorCode::kPlaintextOutOfRange,
                m.get_str() + " outside (-n, n) for n = " + pk.n.get_str());
  }
  mpz_class plain = m;
  if (plain < 0) plain += pk.n;
  mpz_class r;
  do {
    r = rng.InRange(1, pk.n - 1);
  } while (!IsUnit(r, pk.n));
  // g^m = 1 + m n (mod n^2) for g = n + 1.
  const mpz_class gm = (1 + plain * pk.n) % pk.n_squared;
  const mpz_class c = gm * PowMod(r, pk.n, pk.n_squared) % pk.n_squared;
  return Ciphertext(c, pk.n);
}

Ciphertext Encrypt(const PublicKey& pk, const mpz_class& m,
                   std::uint64_t seed) {
  Rng rng(seed);
  return Encrypt(pk, m, rng);
}

Residue Decrypt(const Keypair& key, const Ciphertext& c) {
  const mpz_class& n = key.pk.n;
  if (c.n() != n) {
    throw Error(ErrorCode::kModulusMismatch,
                "ciphertext modulus " + c.n().get_str() + " vs key " +
                    n.get_str());
  }
  if (c.value() <= 0 || c.value() >= key.pk.n_squared ||
      !IsUnit(c.value(), key.pk.n_squared)) {
    throw Error(ErrorCode::kInvalidCiphertext,
                "value " + c.value().get_str() + " is not a unit mod n^2");
  }
  const mpz_class u = PowMod(c.value(), key.sk.lambda, key.pk.n_squared);
  return LFunction(u, n) * key.sk.mu % n;
}

Ciphertext HomAdd(const Ciphertext& a, const Ciphertext& b) {
  CheckSameKey(a, b);
  const mpz_class n_squared = a.n() * a.n();
  return Ciphertext(a.value() * b.value() % n_squared, a.n());
}

Ciphertext ScalarMul(const Ciphertext& a, const mpz_class& s) {
  const mpz_class n_squared = a.n() * a.n();
  // Exponent taken mod n: c^n decrypts to n * m = 0.
  mpz_class exponent;
  mpz_mod(exponent.get_mpz_t(), s.get_mpz_t(), a.n().get_mpz_t());
  return Ciphertext(PowMod(a.value(), exponent, n_squared), a.n());
}

}  // namespace pkse
