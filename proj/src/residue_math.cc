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

#include "pkse/residue_math.h"

#include <algorithm>
#include <sstream>

#include "pkse/error.h"
#include "pkse/random.h"

namespace pkse {

namespace {

const mpz_class kTrialDivisionLimit = mpz_class(1) << 20;

bool TrialDivisionPrime(unsigned long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (unsigned long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

void CheckSameModulus(const Modulus& a, const Modulus& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::kModulusMismatch,
                "operands over Z_" + a.n().get_str() + " and Z_" +
                    b.n().get_str());
  }
}

}  // namespace

bool IsProbablePrime(const mpz_class& candidate, int rounds,
                     std::uint64_t seed) {
  if (candidate < kTrialDivisionLimit) {
    return candidate >= 2 && TrialDivisionPrime(candidate.get_ui());
  }
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul,
                          29ul, 31ul, 37ul}) {
    if (mpz_divisible_ui_p(candidate.get_mpz_t(), p)) return false;
  }
  // candidate - 1 = d * 2^s with d odd.
  const mpz_class minus_one = candidate - 1;
  mpz_class d = minus_one;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }
  Rng rng(seed);
  mpz_class x;
  for (int round = 0; round < rounds; ++round) {
    const mpz_class base = rng.InRange(2, candidate - 2);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(),
             candidate.get_mpz_t());
    if (x == 1 || x == minus_one) continue;
    bool witness = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = x * x % candidate;
      if (x == minus_one) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Modulus::Modulus(mpz_class n) : n_(std::move(n)) {
  if (n_ < 6) {
    throw Error(ErrorCode::kParameterTooSmall,
                "modulus must be at least 6, got " + n_.get_str());
  }
}

Modulus::Modulus(const mpz_class& p, const mpz_class& q) : Modulus(p * q) {
  if (p == q || !IsProbablePrime(p) || !IsProbablePrime(q)) {
    throw Error(ErrorCode::kParameterTooSmall,
                "factors must be distinct primes, got " + p.get_str() + ", " +
                    q.get_str());
  }
  factors_ = std::make_pair(p, q);
}

Residue Modulus::Reduce(const mpz_class& x) const {
  Residue r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), n_.get_mpz_t());
  return r;
}

bool IsUnit(const mpz_class& a, const mpz_class& n) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return g == 1;
}

Residue ModInv(const mpz_class& a, const mpz_class& n) {
  Residue inv;
  if (n <= 1 ||
      mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kNotInvertible,
                a.get_str() + " has no inverse modulo " + n.get_str());
  }
  return inv;
}

mpz_class ToSigned(const Residue& r, const Modulus& m) {
  const Residue c = m.Reduce(r);
  if (2 * c > m.n()) return c - m.n();
  return c;
}

PolyZn::PolyZn(std::vector<mpz_class> coeffs_high_first, Modulus modulus)
    : coeffs_(std::move(coeffs_high_first)), modulus_(std::move(modulus)) {
  for (auto& c : coeffs_) c = modulus_.Reduce(c);
  auto first_nonzero = std::find_if(coeffs_.begin(), coeffs_.end(),
                                    [](const Residue& c) { return c != 0; });
  coeffs_.erase(coeffs_.begin(), first_nonzero);
}

std::vector<mpz_class> PolyZn::signed_coeffs() const {
  std::vector<mpz_class> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(ToSigned(c, modulus_));
  return out;
}

PolyZn PolyFromRoots(std::span<const mpz_class> roots,
                     const Modulus& modulus) {
  std::vector<Residue> acc = {1};
  for (const auto& root : roots) {
    const Residue r = modulus.Reduce(root);
    // acc * (x - r): shift up one degree and subtract r * acc.
    std::vector<Residue> next(acc.size() + 1, 0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] -= r * acc[i];
    }
    for (auto& c : next) c = modulus.Reduce(c);
    acc = std::move(next);
  }
  return PolyZn(std::move(acc), modulus);
}

Residue PolyEval(const PolyZn& p, const mpz_class& x) {
  const Modulus& m = p.modulus();
  const Residue xr = m.Reduce(x);
  Residue acc = 0;
  for (const auto& c : p.coeffs()) acc = m.Reduce(acc * xr + c);
  return acc;
}

PolyZn PolyAdd(const PolyZn& a, const PolyZn& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  const auto& longer = a.coeffs().size() >= b.coeffs().size() ? a : b;
  const auto& shorter = &longer == &a ? b : a;
  std::vector<mpz_class> out = longer.coeffs();
  const std::size_t offset = out.size() - shorter.coeffs().size();
  for (std::size_t i = 0; i < shorter.coeffs().size(); ++i) {
    out[offset + i] += shorter.coeffs()[i];
  }
  return PolyZn(std::move(out), a.modulus());
}

PolyZn PolyScale(const PolyZn& a, const mpz_class& s) {
  std::vector<mpz_class> out = a.coeffs();
  for (auto& c : out) c *= s;
  return PolyZn(std::move(out), a.modulus());
}

PolyZn PolyMul(const PolyZn& a, const PolyZn& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  if (a.is_zero() || b.is_zero()) return PolyZn::Zero(a.modulus());
  std::vector<mpz_class> out(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
      out[i + j] += a.coeffs()[i] * b.coeffs()[j];
    }
  }
  return PolyZn(std::move(out), a.modulus());
}

std::vector<Residue> FindRoots(const PolyZn& p,
                               std::span<const mpz_class> domain) {
  std::vector<Residue> roots;
  for (const auto& t : domain) {
    if (PolyEval(p, t) == 0) roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::string FormatPoly(const PolyZn& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  const auto coeffs = p.signed_coeffs();
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const mpz_class& c = coeffs[i];
    if (c == 0) continue;
    const std::size_t power = coeffs.size() - 1 - i;
    const mpz_class magnitude = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    if (magnitude != 1 || power == 0) out << magnitude.get_str();
    if (power >= 1) out << "x";
    if (power >= 2) out << "^" << power;
    first = false;
  }
  return out.str();
}

MatZn::MatZn(ResidueMatrix entries, Modulus modulus)
    : entries_(std::move(entries)), modulus_(std::move(modulus)) {
  entries_ = entries_.unaryExpr(
      [this](const mpz_class& x) { return modulus_.Reduce(x); });
}

MatZn MatZn::Identity(Eigen::Index dim, Modulus modulus) {
  ResidueMatrix id = ResidueMatrix::Constant(dim, dim, mpz_class(0));
  for (Eigen::Index i = 0; i < dim; ++i) id(i, i) = 1;
  return MatZn(std::move(id), std::move(modulus));
}

ResidueRowVector ReduceRow(const ResidueRowVector& v, const Modulus& m) {
  return v.unaryExpr([&m](const mpz_class& x) { return m.Reduce(x); });
}

MatZn MatMul(const MatZn& a, const MatZn& b) {
  CheckSameModulus(a.modulus(), b.modulus());
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot multiply " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " by " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  ResidueMatrix product = a.entries() * b.entries();
  return MatZn(std::move(product), a.modulus());
}

ResidueRowVector VecMatMul(const ResidueRowVector& v, const MatZn& m) {
  if (v.cols() != m.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row vector of length " + std::to_string(v.cols()) +
                    " against " + std::to_string(m.rows()) + " rows");
  }
  ResidueRowVector product = v * m.entries();
  return ReduceRow(product, m.modulus());
}

std::optional<MatZn> MatInverse(const MatZn& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "inverse of non-square matrix");
  }
  const Modulus& mod = m.modulus();
  const Eigen::Index dim = m.rows();
  ResidueMatrix work = m.entries();
  ResidueMatrix inv = MatZn::Identity(dim, mod).entries();
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index pivot = col;
    while (pivot < dim && !IsUnit(work(pivot, col), mod.n())) ++pivot;
    if (pivot == dim) return std::nullopt;
    if (pivot != col) {
      work.row(pivot).swap(work.row(col));
      inv.row(pivot).swap(inv.row(col));
    }
    const Residue scale = ModInv(work(col, col), mod);
    for (Eigen::Index j = 0; j < dim; ++j) {
      work(col, j) = mod.Reduce(work(col, j) * scale);
      inv(col, j) = mod.Reduce(inv(col, j) * scale);
    }
    for (Eigen::Index row = 0; row < dim; ++row) {
      if (row == col || work(row, col) == 0) continue;
      const Residue factor = work(row, col);
      for (Eigen::Index j = 0; j < dim; ++j) {
        work(row, j) = mod.Reduce(work(row, j) - factor * work(col, j));
        inv(row, j) = mod.Reduce(inv(row, j) - factor * inv(col, j));
      }
    }
  }
  return MatZn(std::move(inv), mod);
}

InvertiblePair MatRandomInvertible(Eigen::Index dim, const Modulus& modulus,
                                   std::uint64_t seed, int max_attempts) {
  if (dim < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "dimension must be positive");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    ResidueMatrix entries(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        entries(r, c) = rng.Below(modulus.n());
      }
    }
    MatZn candidate(std::move(entries), modulus);
    if (auto inverse = MatInverse(candidate)) {
      return {std::move(candidate), *std::move(inverse)};
    }
  }
  throw Error(ErrorCode::kRandomnessExhausted,
              "no invertible matrix after " + std::to_string(max_attempts) +
                  " draws");
}

}  // namespace pkse
