#pragma once

// Finite fields GF(p^r) with explicit modulus, field trace and dual bases.
//
// Elements are plain integer indices 0..d-1: the coefficient vector
// (c_0, ..., c_{r-1}) of c_0 + c_1 x + ... is encoded as sum c_i p^i. For
// GF(4) with x^2+x+1 this gives {0, 1, w, w+1} -> {0, 1, 2, 3}.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "olsmub/error.hpp"
#include "olsmub/numtheory.hpp"

namespace olsmub {

struct FieldSpec {
  int p = 0;
  int r = 0;
  int d = 0;
  std::vector<int> irreducible;  // monic, constant term first, size r + 1

  bool operator==(const FieldSpec&) const = default;
};

namespace poly {

using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  trim(out);
  return out;
}

/// Remainder of a modulo a monic polynomial m.
inline Poly rem(Poly a, const Poly& m, int p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const int lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = mod(a[shift + i] - lead * m[i], p);
    trim(a);
  }
  return a;
}

}  // namespace poly

/// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(int p, std::span<const int> coeffs) {
  poly::Poly f(coeffs.begin(), coeffs.end());
  poly::trim(f);
  if (f.size() < 2) return false;
  const int deg = static_cast<int>(f.size()) - 1;
  if (f.back() != 1) return false;
  for (int k = 1; 2 * k <= deg; ++k) {
    const int count = ipow(p, k);
    for (int code = 0; code < count; ++code) {
      poly::Poly g(k + 1, 0);
      int c = code;
      for (int i = 0; i < k; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[k] = 1;
      if (poly::rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

/// Lexicographically smallest monic irreducible of degree r, comparing the
/// constant coefficient first.
inline std::vector<int> smallest_irreducible(int p, int r) {
  if (!is_prime(p)) throw NotPrime("smallest_irreducible: " + std::to_string(p) + " is not prime");
  if (r < 1) throw InvalidArgument("smallest_irreducible: degree must be >= 1");
  const int count = ipow(p, r);
  for (int code = 0; code < count; ++code) {
    std::vector<int> f(r + 1, 0);
    int c = code;
    // c_0 is the most significant digit of the enumeration order.
    for (int i = r - 1; i >= 0; --i) {
      f[i] = c % p;
      c /= p;
    }
    f[r] = 1;
    if (is_irreducible(p, f)) return f;
  }
  throw ConstructionError("no irreducible polynomial found");
}

class GaloisField;
using FieldPtr = std::shared_ptr<const GaloisField>;

class FieldElement {
 public:
  FieldElement(FieldPtr field, int value);

  const FieldPtr& field() const { return field_; }
  int index() const { return value_; }
  std::vector<int> coeffs() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  bool operator==(const FieldElement& o) const;

 private:
  FieldPtr field_;
  int value_;
};

class GaloisField : public std::enable_shared_from_this<GaloisField> {
 public:
  /// Field of order d with the smallest irreducible modulus.
  static FieldPtr create(int d) {
    auto pr = prime_power(d);
    if (!pr) throw NotPrimePower("GF(" + std::to_string(d) + "): not a prime power");
    return create(pr->first, smallest_irreducible(pr->first, pr->second));
  }

  static FieldPtr create(int p, std::vector<int> irreducible) {
    if (!is_prime(p)) throw NotPrime("GaloisField: " + std::to_string(p) + " is not prime");
    if (!is_irreducible(p, irreducible))
      throw NotIrreducible("GaloisField: modulus is not a monic irreducible polynomial");
    return FieldPtr(new GaloisField(p, std::move(irreducible)));
  }

  const FieldSpec& spec() const { return spec_; }
  int p() const { return spec_.p; }
  int r() const { return spec_.r; }
  int order() const { return spec_.d; }

  int add(int a, int b) const { return add_[a * spec_.d + b]; }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int mul(int a, int b) const { return mul_[a * spec_.d + b]; }

  int inv(int a) const {
    if (a == 0) throw InvalidArgument("GaloisField::inv: zero has no inverse");
    for (int b = 1; b < spec_.d; ++b)
      if (mul(a, b) == 1) return b;
    throw ConstructionError("GaloisField::inv: no inverse found");
  }

  int pow(int a, int e) const {
    int out = 1;
    while (e-- > 0) out = mul(out, a);
    return out;
  }

  /// Embeds the prime-field integer k as an element.
  int from_prime(int k) const { return mod(k, spec_.p); }

  /// tr(a) = a + a^p + ... + a^(p^(r-1)), returned as an integer 0..p-1.
  int trace(int a) const {
    int sum = 0;
    int term = a;
    for (int i = 0; i < spec_.r; ++i) {
      sum = add(sum, term);
      term = pow(term, spec_.p);
    }
    if (sum >= spec_.p) throw ConstructionError("trace left the prime field");
    return sum;
  }

  std::vector<int> coeffs(int a) const {
    std::vector<int> c(spec_.r);
    for (int i = 0; i < spec_.r; ++i) {
      c[i] = a % spec_.p;
      a /= spec_.p;
    }
    return c;
  }

  int index(std::span<const int> c) const {
    if (static_cast<int>(c.size()) != spec_.r) throw InvalidArgument("coefficient vector has wrong length");
    int out = 0;
    for (int i = spec_.r - 1; i >= 0; --i) {
      if (c[i] < 0 || c[i] >= spec_.p) throw InvalidArgument("coefficient out of range");
      out = out * spec_.p + c[i];
    }
    return out;
  }

  FieldElement element(int a) const {
    if (a < 0 || a >= spec_.d) throw InvalidArgument("field element index out of range");
    return {shared_from_this(), a};
  }

 private:
  GaloisField(int p, std::vector<int> irreducible) {
    spec_.p = p;
    spec_.r = static_cast<int>(irreducible.size()) - 1;
    spec_.d = ipow(p, spec_.r);
    spec_.irreducible = std::move(irreducible);
    const int d = spec_.d;
    add_.resize(d * d);
    mul_.resize(d * d);
    neg_.resize(d);
    for (int a = 0; a < d; ++a) {
      const auto ca = coeffs(a);
      std::vector<int> cn(spec_.r);
      for (int i = 0; i < spec_.r; ++i) cn[i] = mod(-ca[i], p);
      neg_[a] = index(cn);
      for (int b = 0; b < d; ++b) {
        const auto cb = coeffs(b);
        std::vector<int> cs(spec_.r);
        for (int i = 0; i < spec_.r; ++i) cs[i] = (ca[i] + cb[i]) % p;
        add_[a * d + b] = index(cs);
        auto prod = poly::rem(poly::mul(ca, cb, p), spec_.irreducible, p);
        prod.resize(spec_.r, 0);
        mul_[a * d + b] = index(prod);
      }
    }
  }

  FieldSpec spec_;
  std::vector<int> add_, mul_, neg_;
};

inline FieldElement::FieldElement(FieldPtr field, int value) : field_(std::move(field)), value_(value) {}

inline std::vector<int> FieldElement::coeffs() const { return field_->coeffs(value_); }

inline void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field() != b.field() && !(a.field()->spec() == b.field()->spec()))
    throw FieldMismatch("field elements belong to different fields");
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field_, a.field_->add(a.value_, b.value_)};
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field_, a.field_->mul(a.value_, b.value_)};
}

inline bool FieldElement::operator==(const FieldElement& o) const {
  return value_ == o.value_ && (field_ == o.field_ || field_->spec() == o.field_->spec());
}

inline int trace(const FieldElement& a) { return a.field()->trace(a.index()); }

/// A field basis e_i together with its trace-dual basis.
struct FieldBasisPair {
  std::vector<int> basis;
  std::vector<int> dual;
};

inline bool linearly_independent(const GaloisField& f, std::span<const int> elems) {
  std::vector<std::vector<int>> rows;
  for (int e : elems) rows.push_back(f.coeffs(e));
  return rank_mod_p(rows, f.p()) == static_cast<int>(elems.size());
}

/// Unique dual of a basis: tr(e_i * dual_j) = delta_ij, one linear solve per j.
inline FieldBasisPair dual_basis(const GaloisField& f, std::vector<int> basis) {
  const int r = f.r();
  if (static_cast<int>(basis.size()) != r)
    throw DegenerateBasis("dual_basis: need exactly r = " + std::to_string(r) + " elements");
  for (int e : basis)
    if (e < 0 || e >= f.order()) throw InvalidArgument("dual_basis: element out of range");
  if (!linearly_independent(f, basis)) throw DegenerateBasis("dual_basis: basis is linearly dependent");

  // T[i][k] = tr(e_i * x^k) so that tr(e_i * y) = sum_k T[i][k] y_k.
  std::vector<std::vector<int>> t(r, std::vector<int>(r));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) t[i][k] = f.trace(f.mul(basis[i], ipow(f.p(), k)));

  FieldBasisPair out{basis, {}};
  for (int j = 0; j < r; ++j) {
    std::vector<int> rhs(r, 0);
    rhs[j] = 1;
    auto y = solve_mod_p(t, rhs, f.p());
    if (!y) throw DegenerateBasis("dual_basis: trace form is singular on this basis");
    out.dual.push_back(f.index(*y));
  }
  return out;
}

/// (w, 1) for GF(4), the polynomial basis (1, x, ..., x^(r-1)) otherwise.
inline std::vector<int> default_basis(const GaloisField& f) {
  if (f.p() == 2 && f.r() == 2) return {2, 1};
  std::vector<int> b;
  for (int k = 0; k < f.r(); ++k) b.push_back(ipow(f.p(), k));
  return b;
}

inline FieldBasisPair default_basis_pair(const GaloisField& f) { return dual_basis(f, default_basis(f)); }

/// m_i = tr(m * dual_i): coordinates of m in the basis.
inline std::vector<int> decompose_m(const GaloisField& f, int m, const FieldBasisPair& pair) {
  std::vector<int> out;
  for (int e : pair.dual) out.push_back(f.trace(f.mul(m, e)));
  return out;
}

/// n_i = tr(n * e_i): coordinates of n in the dual basis.
inline std::vector<int> decompose_n(const GaloisField& f, int n, const FieldBasisPair& pair) {
  std::vector<int> out;
  for (int e : pair.basis) out.push_back(f.trace(f.mul(n, e)));
  return out;
}

inline int compose(const GaloisField& f, std::span<const int> coords, std::span<const int> elems) {
  int out = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) out = f.add(out, f.mul(f.from_prime(coords[i]), elems[i]));
  return out;
}

inline int compose_m(const GaloisField& f, std::span<const int> coords, const FieldBasisPair& pair) {
  return compose(f, coords, pair.basis);
}

inline int compose_n(const GaloisField& f, std::span<const int> coords, const FieldBasisPair& pair) {
  return compose(f, coords, pair.dual);
}

}  // namespace olsmub
