#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "olsmub/acceptance.hpp"
#include "olsmub/gfield.hpp"
#include "olsmub/numtheory.hpp"

using namespace olsmub;

namespace {

std::vector<bool> sieve(int n) {
  std::vector<bool> prime(n + 1, true);
  prime[0] = prime[1] = false;
  for (int i = 2; i * i <= n; ++i)
    if (prime[i])
      for (int j = i * i; j <= n; j += i) prime[j] = false;
  return prime;
}

// Multiplicative order of a nonzero element.
int order_of(const GaloisField& f, int a) {
  int k = 1;
  for (int x = a; x != 1; x = f.mul(x, a)) ++k;
  return k;
}

}  // namespace

TEST(NumberTheory, IsPrimeMatchesSieve) {
  const auto ref = sieve(2000);
  for (int n = 0; n <= 2000; ++n) EXPECT_EQ(is_prime(n), ref[n]) << n;
}

TEST(NumberTheory, FactorizeMultipliesBack) {
  for (int d = 2; d <= 500; ++d) {
    int prod = 1;
    for (const auto& f : factorize(d)) {
      EXPECT_TRUE(is_prime(f.p));
      EXPECT_EQ(ipow(f.p, f.r), f.value);
      prod *= f.value;
    }
    EXPECT_EQ(prod, d);
  }
}

TEST(NumberTheory, PrimePower) {
  EXPECT_EQ(prime_power(8), std::make_pair(2, 3));
  EXPECT_EQ(prime_power(9), std::make_pair(3, 2));
  EXPECT_EQ(prime_power(7), std::make_pair(7, 1));
  EXPECT_FALSE(prime_power(6));
  EXPECT_FALSE(prime_power(12));
  EXPECT_FALSE(prime_power(1));
}

TEST(NumberTheory, SolveModP) {
  // x + y = 1, x + 2y = 0 over F_3 -> y = -1 = 2, x = 2
  auto x = solve_mod_p({{1, 1}, {1, 2}}, {1, 0}, 3);
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (std::vector<int>{2, 2}));
  EXPECT_FALSE(solve_mod_p({{1, 1}, {2, 2}}, {1, 0}, 3));
  EXPECT_EQ(rank_mod_p({{1, 1}, {2, 2}}, 3), 1);
}

TEST(Irreducible, SmallestModuli) {
  EXPECT_EQ(smallest_irreducible(2, 2), (std::vector<int>{1, 1, 1}));     // x^2 + x + 1
  EXPECT_EQ(smallest_irreducible(2, 3), (std::vector<int>{1, 0, 1, 1}));  // x^3 + x^2 + 1, low-degree-first order
  EXPECT_EQ(smallest_irreducible(3, 2), (std::vector<int>{1, 0, 1}));     // x^2 + 1
}

TEST(Irreducible, RejectsReducible) {
  EXPECT_FALSE(is_irreducible(2, std::vector<int>{1, 0, 1}));  // (x+1)^2
  EXPECT_FALSE(is_irreducible(3, std::vector<int>{2, 0, 1}));  // x^2 - 1
  EXPECT_THROW(GaloisField::create(2, {1, 0, 1}), NotIrreducible);
  EXPECT_THROW(GaloisField::create(4, {1, 1, 1}), NotPrime);
}

TEST(Irreducible, CountMatchesNecklaceFormula) {
  // Number of monic irreducibles of degree r over F_p: (1/r) sum_{k|r} mu(k) p^{r/k}.
  auto mobius = [](int n) {
    int m = 1;
    for (const auto& f : factorize(n)) {
      if (f.r > 1) return 0;
      m = -m;
    }
    return m;
  };
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}}) {
    int expected = 0;
    for (int k = 1; k <= r; ++k)
      if (r % k == 0) expected += mobius(k) * ipow(p, r / k);
    expected /= r;
    int count = 0;
    for (int code = 0; code < ipow(p, r); ++code) {
      std::vector<int> f(r + 1);
      int c = code;
      for (int i = 0; i < r; ++i, c /= p) f[i] = c % p;
      f[r] = 1;
      count += is_irreducible(p, f);
    }
    EXPECT_EQ(count, expected) << p << "^" << r;
  }
}

TEST(GaloisField, AxiomsExhaustive) {
  for (int q : {2, 3, 4, 5, 7, 8, 9, 16, 25, 27}) EXPECT_TRUE(field_axioms_hold(*GaloisField::create(q))) << q;
}

TEST(GaloisField, Gf4Tables) {
  auto f = GaloisField::create(4);  // 0, 1, w, w+1
  EXPECT_EQ(f->mul(2, 2), 3);       // w^2 = w + 1
  EXPECT_EQ(f->mul(2, 3), 1);       // w (w + 1) = 1
  EXPECT_EQ(f->mul(3, 3), 2);
  EXPECT_EQ(f->add(2, 3), 1);
  EXPECT_EQ(f->add(2, 2), 0);
}

TEST(GaloisField, MultiplicativeGroupIsCyclic) {
  for (int q : {4, 8, 9, 16, 25}) {
    auto f = GaloisField::create(q);
    int max_order = 0;
    for (int a = 1; a < q; ++a) {
      const int k = order_of(*f, a);
      EXPECT_EQ((q - 1) % k, 0);
      max_order = std::max(max_order, k);
    }
    EXPECT_EQ(max_order, q - 1) << q;
  }
}

TEST(GaloisField, FrobeniusIsAdditive) {
  for (int q : {4, 8, 9, 27}) {
    auto f = GaloisField::create(q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) EXPECT_EQ(f->pow(f->add(a, b), f->p()), f->add(f->pow(a, f->p()), f->pow(b, f->p())));
  }
}

TEST(GaloisField, CoefficientRoundTrip) {
  auto f = GaloisField::create(27);
  for (int a = 0; a < 27; ++a) EXPECT_EQ(f->index(f->coeffs(a)), a);
}

TEST(FieldElement, MismatchedFieldsThrow) {
  auto f4 = GaloisField::create(4);
  auto f4b = GaloisField::create(4);
  auto f9 = GaloisField::create(9);
  EXPECT_EQ((f4->element(2) * f4->element(2)).index(), 3);
  EXPECT_EQ((f4->element(2) + f4b->element(3)).index(), 1);  // equal specs are compatible
  EXPECT_THROW(f4->element(1) + f9->element(1), FieldMismatch);
  EXPECT_THROW(f4->element(4), InvalidArgument);
}

TEST(Trace, LinearAndInPrimeField) {
  for (int q : {4, 8, 9, 25}) {
    auto f = GaloisField::create(q);
    std::set<int> values;
    for (int a = 0; a < q; ++a) {
      values.insert(f->trace(a));
      for (int b = 0; b < q; ++b) EXPECT_EQ(f->trace(f->add(a, b)), mod(f->trace(a) + f->trace(b), f->p()));
      for (int k = 0; k < f->p(); ++k) EXPECT_EQ(f->trace(f->mul(f->from_prime(k), a)), mod(k * f->trace(a), f->p()));
    }
    EXPECT_EQ(static_cast<int>(values.size()), f->p());  // trace is onto F_p
  }
}

TEST(Trace, Gf4Values) {
  auto f = GaloisField::create(4);
  EXPECT_EQ(f->trace(0), 0);
  EXPECT_EQ(f->trace(1), 0);  // 1 + 1
  EXPECT_EQ(f->trace(2), 1);  // w + w^2 = 1
  EXPECT_EQ(f->trace(3), 1);
}

TEST(DualBasis, OmegaOneGivesOneOmegaPlusOne) {
  auto f = GaloisField::create(4);
  const auto pair = dual_basis(*f, {2, 1});
  EXPECT_EQ(pair.dual, (std::vector<int>{1, 3}));
  EXPECT_EQ(default_basis_pair(*f).basis, (std::vector<int>{2, 1}));
}

TEST(DualBasis, DefiningPropertyForEveryBasis) {
  for (int q : {4, 8, 9}) {
    auto f = GaloisField::create(q);
    const int r = f->r();
    int bases = 0;
    // All ordered bases for r = 2; a sample for r = 3.
    for (int a = 1; a < q; ++a)
      for (int b = 1; b < q; ++b)
        for (int c = (r == 3 ? 1 : 0); c < (r == 3 ? q : 1); ++c) {
          std::vector<int> basis = {a, b};
          if (r == 3) basis.push_back(c);
          if (!linearly_independent(*f, basis)) {
            EXPECT_THROW(dual_basis(*f, basis), DegenerateBasis);
            continue;
          }
          const auto pair = dual_basis(*f, basis);
          ++bases;
          for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) EXPECT_EQ(f->trace(f->mul(pair.basis[i], pair.dual[j])), i == j ? 1 : 0);
          EXPECT_TRUE(trace_identity_holds(*f, pair));
        }
    EXPECT_GT(bases, 0);
  }
}

TEST(DualBasis, Gf8PolynomialBasis) {
  // Explicit modulus x^3 + x + 1, basis (1, x, x^2).
  auto f = GaloisField::create(2, {1, 1, 0, 1});
  const auto pair = dual_basis(*f, {1, 2, 4});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(f->trace(f->mul(pair.basis[i], pair.dual[j])), i == j ? 1 : 0);
  // tr(1) = 1, tr(x) = tr(x^2) = 0, tr(x^3) = tr(x + 1) = 1, tr(x^4) = tr(x^2 + x) = 0 give dual (1, x^2, x).
  EXPECT_EQ(pair.dual, (std::vector<int>{1, 4, 2}));
  EXPECT_TRUE(field_axioms_hold(*f));
}

TEST(DualBasis, WrongSizeOrDependent) {
  auto f = GaloisField::create(4);
  EXPECT_THROW(dual_basis(*f, {1}), DegenerateBasis);
  EXPECT_THROW(dual_basis(*f, {2, 2}), DegenerateBasis);
  EXPECT_THROW(dual_basis(*f, {0, 1}), DegenerateBasis);
}

TEST(Decompose, ComposeInverts) {
  for (int q : {4, 8, 9, 27}) {
    auto f = GaloisField::create(q);
    const auto pair = default_basis_pair(*f);
    for (int x = 0; x < q; ++x) {
      EXPECT_EQ(compose_m(*f, decompose_m(*f, x, pair), pair), x);
      EXPECT_EQ(compose_n(*f, decompose_n(*f, x, pair), pair), x);
    }
  }
}

TEST(Decompose, Gf4OmegaOne) {
  // m = m_1 w + m_2 * 1, n = n_1 * 1 + n_2 (w + 1)
  auto f = GaloisField::create(4);
  const auto pair = default_basis_pair(*f);
  EXPECT_EQ(decompose_m(*f, 2, pair), (std::vector<int>{1, 0}));
  EXPECT_EQ(decompose_m(*f, 1, pair), (std::vector<int>{0, 1}));
  EXPECT_EQ(decompose_n(*f, 1, pair), (std::vector<int>{1, 0}));
  EXPECT_EQ(decompose_n(*f, 3, pair), (std::vector<int>{0, 1}));
}
