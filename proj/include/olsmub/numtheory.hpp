#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "olsmub/error.hpp"

namespace olsmub {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

struct PrimePowerFactor {
  int p;
  int r;
  int value;  // p^r
};

/// Factorization d = prod p_i^{r_i}, primes ascending.
inline std::vector<PrimePowerFactor> factorize(int d) {
  if (d < 1) throw InvalidArgument("factorize: d must be positive");
  std::vector<PrimePowerFactor> out;
  for (int q = 2; q * q <= d; ++q) {
    if (d % q != 0) continue;
    PrimePowerFactor f{q, 0, 1};
    while (d % q == 0) {
      d /= q;
      ++f.r;
      f.value *= q;
    }
    out.push_back(f);
  }
  if (d > 1) out.push_back({d, 1, d});
  return out;
}

/// (p, r) with d = p^r, or nullopt when d is not a prime power.
inline std::optional<std::pair<int, int>> prime_power(int d) {
  if (d < 2) return std::nullopt;
  auto f = factorize(d);
  if (f.size() != 1) return std::nullopt;
  return std::pair{f[0].p, f[0].r};
}

inline int ipow(int base, int exp) {
  int out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

inline int mod(std::int64_t a, int m) {
  auto r = static_cast<int>(a % m);
  return r < 0 ? r + m : r;
}

/// Inverse of a modulo prime p.
inline int inv_mod(int a, int p) {
  a = mod(a, p);
  if (a == 0) throw InvalidArgument("inv_mod: zero has no inverse");
  int result = 1;
  int base = a;
  int e = p - 2;
  while (e > 0) {
    if (e & 1) result = static_cast<int>(static_cast<std::int64_t>(result) * base % p);
    base = static_cast<int>(static_cast<std::int64_t>(base) * base % p);
    e >>= 1;
  }
  return result;
}

/// Solves A x = b over F_p (A square, row-major). Returns nullopt when A is singular.
inline std::optional<std::vector<int>> solve_mod_p(std::vector<std::vector<int>> a,
                                                   std::vector<int> b, int p) {
  const auto n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && mod(a[pivot][col], p) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const int inv = inv_mod(a[col][col], p);
    for (std::size_t k = 0; k < n; ++k) a[col][k] = mod(static_cast<std::int64_t>(a[col][k]) * inv, p);
    b[col] = mod(static_cast<std::int64_t>(b[col]) * inv, p);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const int f = mod(a[row][col], p);
      if (f == 0) continue;
      for (std::size_t k = 0; k < n; ++k) a[row][k] = mod(a[row][k] - static_cast<std::int64_t>(f) * a[col][k], p);
      b[row] = mod(b[row] - static_cast<std::int64_t>(f) * b[col], p);
    }
  }
  return b;
}

/// Rank of a matrix over F_p.
inline int rank_mod_p(std::vector<std::vector<int>> a, int p) {
  int rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t col = 0; col < cols && static_cast<std::size_t>(rank) < rows; ++col) {
    auto pivot = static_cast<std::size_t>(rank);
    while (pivot < rows && mod(a[pivot][col], p) == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const int inv = inv_mod(a[rank][col], p);
    for (auto& v : a[rank]) v = mod(static_cast<std::int64_t>(v) * inv, p);
    for (std::size_t row = 0; row < rows; ++row) {
      if (row == static_cast<std::size_t>(rank)) continue;
      const int f = mod(a[row][col], p);
      if (f == 0) continue;
      for (std::size_t k = 0; k < cols; ++k) a[row][k] = mod(a[row][k] - static_cast<std::int64_t>(f) * a[rank][k], p);
    }
    ++rank;
  }
  return rank;
}

}  // namespace olsmub
