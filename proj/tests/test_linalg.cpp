#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "olsmub/linalg.hpp"

using namespace olsmub;

namespace {

CMat random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST(Jacobi, MatchesEigenSolver) {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3, 4, 5, 8, 9, 16}) {
    for (int trial = 0; trial < 5; ++trial) {
      const CMat h = random_hermitian(n, rng);
      const auto mine = jacobi_eigh(h);
      const Eigen::SelfAdjointEigenSolver<CMat> ref(h);
      for (int k = 0; k < n; ++k) EXPECT_NEAR(mine.values[k], ref.eigenvalues()(k), 1e-10);
      EXPECT_LT(unitarity_deviation(mine.vectors), 1e-10);
      const CMat back = mine.vectors * Eigen::Map<const Eigen::VectorXd>(mine.values.data(), n).cast<cplx>().asDiagonal() *
                        mine.vectors.adjoint();
      EXPECT_LT(max_abs(back - h), 1e-10);
    }
  }
}

TEST(Jacobi, DegenerateSpectrum) {
  // Projector of rank 2 in dimension 4 has eigenvalues 0, 0, 1, 1.
  CVec u = CVec::Zero(4), v = CVec::Zero(4);
  u << 1, cplx(0, 1), 0, 0;
  v << 0, 0, 1, -1;
  u.normalize();
  v.normalize();
  const CMat p = u * u.adjoint() + v * v.adjoint();
  const auto e = jacobi_eigh(p);
  EXPECT_NEAR(e.values[0], 0, 1e-12);
  EXPECT_NEAR(e.values[1], 0, 1e-12);
  EXPECT_NEAR(e.values[2], 1, 1e-12);
  EXPECT_NEAR(e.values[3], 1, 1e-12);
}

TEST(Jacobi, RejectsNonHermitian) {
  CMat a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(jacobi_eigh(a), NotHermitian);
  EXPECT_THROW(jacobi_eigh(CMat::Zero(2, 3)), DimensionMismatch);
}

TEST(Kron, MixedProductProperty) {
  std::mt19937_64 rng(3);
  const CMat a = random_hermitian(2, rng), b = random_hermitian(3, rng);
  const CMat c = random_hermitian(2, rng), d = random_hermitian(3, rng);
  EXPECT_LT(max_abs(kron(a, b) * kron(c, d) - kron(CMat(a * c), CMat(b * d))), 1e-12);
  CVec x(2), y(3);
  x << 1, 2;
  y << 3, 4, 5;
  const CVec xy = kron(x, y);
  EXPECT_EQ(xy(0), cplx(3));
  EXPECT_EQ(xy(5), cplx(10));
}

TEST(FixPhase, LargestComponentRealPositive) {
  CVec v(3);
  v << cplx(0, 0.1), cplx(0, -0.9), 0.2;
  fix_phase(v);
  EXPECT_NEAR(v(1).real(), 0.9, 1e-15);
  EXPECT_NEAR(v(1).imag(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v(0)), 0.1, 1e-15);
}

TEST(RootOfUnity, Periodic) {
  for (int d : {2, 3, 5, 8}) {
    EXPECT_LT(std::abs(root_of_unity(d, d) - 1.0), 1e-15);
    EXPECT_LT(std::abs(root_of_unity(d, -1) - root_of_unity(d, d - 1)), 1e-15);
    EXPECT_LT(std::abs(std::pow(root_of_unity(d, 1), d) - 1.0), 1e-12);
  }
}
