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

#ifndef PKSE_RESIDUE_MATH_H_
#define PKSE_RESIDUE_MATH_H_

// Arithmetic in the residue ring Z_n: modular inverses, polynomials over Z_n
// and dense matrices over Z_n. n is usually composite (a Paillier modulus),
// so every division is guarded by a coprimality check.

#include <gmpxx.h>

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpz_class;
  using Literal = mpz_class;
  using Nested = mpz_class;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace pkse {

using Residue = mpz_class;
using ResidueMatrix = Eigen::Matrix<mpz_class, Eigen::Dynamic, Eigen::Dynamic>;
using ResidueRowVector = Eigen::Matrix<mpz_class, 1, Eigen::Dynamic>;

// Deterministic primality: trial division settles everything below 2^20,
// larger candidates get Miller-Rabin with `rounds` seeded random bases.
bool IsProbablePrime(const mpz_class& candidate, int rounds = 64,
                     std::uint64_t seed = 0x5eed);

class Modulus {
 public:
  // Public view: only n is known. Requires n >= 6.
  explicit Modulus(mpz_class n);
  // Owner/user view: n = p * q with p != q both prime.
  Modulus(const mpz_class& p, const mpz_class& q);

  const mpz_class& n() const { return n_; }
  const std::optional<std::pair<mpz_class, mpz_class>>& factors() const {
    return factors_;
  }

  // Canonical representative in [0, n).
  Residue Reduce(const mpz_class& x) const;

  // Equality is on n alone; factor knowledge is not part of the ring.
  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.n_ == b.n_;
  }

 private:
  mpz_class n_;
  std::optional<std::pair<mpz_class, mpz_class>> factors_;
};

// Returns b with a*b = 1 (mod n). Throws kNotInvertible when gcd(a, n) != 1.
Residue ModInv(const mpz_class& a, const mpz_class& n);
inline Residue ModInv(const mpz_class& a, const Modulus& m) {
  return ModInv(a, m.n());
}

bool IsUnit(const mpz_class& a, const mpz_class& n);

// Residues above n/2 map to their negative representative. Display only: it
// lets x^2 + 136x + 6 in Z_143 print as x^2 - 7x + 6.
mpz_class ToSigned(const Residue& r, const Modulus& m);

// Polynomial over Z_n with coefficients stored highest degree first. The
// empty sequence is the zero polynomial; leading zeros are always trimmed.
class PolyZn {
 public:
  PolyZn(std::vector<mpz_class> coeffs_high_first, Modulus modulus);

  static PolyZn Zero(Modulus modulus) { return PolyZn({}, std::move(modulus)); }

  const std::vector<Residue>& coeffs() const { return coeffs_; }
  const Modulus& modulus() const { return modulus_; }
  bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  // Coefficients with residues above n/2 shown as negatives.
  std::vector<mpz_class> signed_coeffs() const;

  friend bool operator==(const PolyZn& a, const PolyZn& b) {
    return a.modulus_ == b.modulus_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<Residue> coeffs_;
  Modulus modulus_;
};

// Monic product of (x - r) over `roots`; the empty product is 1.
PolyZn PolyFromRoots(std::span<const mpz_class> roots, const Modulus& modulus);
Residue PolyEval(const PolyZn& p, const mpz_class& x);
PolyZn PolyAdd(const PolyZn& a, const PolyZn& b);
PolyZn PolyScale(const PolyZn& a, const mpz_class& s);
PolyZn PolyMul(const PolyZn& a, const PolyZn& b);

// Every t in `domain` with p(t) = 0 (mod n), ascending, duplicates removed.
// Exhaustive by construction: factoring over composite Z_n is as hard as
// factoring n.
std::vector<Residue> FindRoots(const PolyZn& p,
                               std::span<const mpz_class> domain);

// "x^2 - 7x + 6" style rendering with signed coefficients.
std::string FormatPoly(const PolyZn& p);

// Dense matrix over Z_n, backed by an Eigen matrix of mpz_class.
class MatZn {
 public:
  MatZn(ResidueMatrix entries, Modulus modulus);

  static MatZn Identity(Eigen::Index dim, Modulus modulus);

  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }
  const Residue& operator()(Eigen::Index r, Eigen::Index c) const {
    return entries_(r, c);
  }
  const ResidueMatrix& entries() const { return entries_; }
  const Modulus& modulus() const { return modulus_; }

  friend bool operator==(const MatZn& a, const MatZn& b) {
    return a.modulus_ == b.modulus_ && a.rows() == b.rows() &&
           a.cols() == b.cols() && a.entries_ == b.entries_;
  }

 private:
  ResidueMatrix entries_;
  Modulus modulus_;
};

// Reduces every entry into [0, n).
ResidueRowVector ReduceRow(const ResidueRowVector& v, const Modulus& m);

MatZn MatMul(const MatZn& a, const MatZn& b);
ResidueRowVector VecMatMul(const ResidueRowVector& v, const MatZn& m);

// Gauss-Jordan elimination over Z_n. Pivots must be units; returns nullopt
// when no unit pivot exists in some column (for composite n this also
// rejects a few matrices that are invertible, which callers resample).
std::optional<MatZn> MatInverse(const MatZn& m);

struct InvertiblePair {
  MatZn matrix;
  MatZn inverse;
};

// Uniformly random dim x dim matrix, resampled until it inverts. Throws
// kRandomnessExhausted after `max_attempts` failures.
InvertiblePair MatRandomInvertible(Eigen::Index dim, const Modulus& modulus,
                                   std::uint64_t seed,
                                   int max_attempts = 1000);

}  // namespace pkse

#endif  // PKSE_RESIDUE_MATH_H_
