#pragma once

// Dense complex matrices (Eigen storage) and a cyclic Jacobi eigensolver for
// small Hermitian matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "olsmub/error.hpp"

namespace olsmub {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kTolerance = 1e-10;

/// exp(2 pi i k / d)
inline cplx root_of_unity(int d, long long k) {
  const long long r = ((k % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
  return std::polar(1.0, angle);
}

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double unitarity_deviation(const CMat& u) {
  return max_abs(u.adjoint() * u - CMat::Identity(u.rows(), u.cols()));
}

inline bool is_unitary(const CMat& u, double tol = kTolerance) { return unitarity_deviation(u) <= tol; }

inline double hermiticity_deviation(const CMat& h) { return max_abs(h - h.adjoint()); }

inline bool is_hermitian(const CMat& h, double tol = kTolerance) { return hermiticity_deviation(h) <= tol; }

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline double commutator_norm(const CMat& a, const CMat& b) { return max_abs(a * b - b * a); }

/// Makes the largest-magnitude component real and positive (first index on ties).
inline void fix_phase(Eigen::Ref<CVec> v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs + 1e-12) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  v *= std::conj(v(best)) / best_abs;
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMat vectors;                // columns, matching `values`
  int sweeps = 0;
};

inline double off_diagonal_norm(const CMat& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `threshold` (relative to the matrix norm).
inline EigenDecomposition jacobi_eigh(const CMat& h, double threshold = 1e-12, int max_sweeps = 100) {
  if (h.rows() != h.cols()) throw DimensionMismatch("jacobi_eigh: matrix is not square");
  if (!is_hermitian(h, 1e-9 * std::max(1.0, max_abs(h)))) throw NotHermitian("jacobi_eigh: matrix is not Hermitian");
  const Eigen::Index n = h.rows();
  CMat a = 0.5 * (h + h.adjoint());
  CMat v = CMat::Identity(n, n);
  const double scale = std::max(1.0, a.norm());
  int sweep = 0;
  for (; sweep < max_sweeps && off_diagonal_norm(a) > threshold * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g < 1e-300) continue;
        const cplx phase = a(p, q) / g;  // a_pq = g e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * g, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // Columns p, q of U = diag(1, e^{-i phi}) * [[c, -s], [s, c]].
        const cplx up_p = c, up_q = -s;
        const cplx uq_p = std::conj(phase) * s, uq_q = std::conj(phase) * c;
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A U
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * up_p + akq * uq_p;
          a(k, q) = akp * up_q + akq * uq_q;
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * up_p + vkq * uq_p;
          v(k, q) = vkp * up_q + vkq * uq_q;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- U^dagger A
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(up_p) * apk + std::conj(uq_p) * aqk;
          a(q, k) = std::conj(up_q) * apk + std::conj(uq_q) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
  }
  if (off_diagonal_norm(a) > threshold * scale) throw ConstructionError("jacobi_eigh: no convergence");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
  EigenDecomposition out;
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values.push_back(a(order[k], order[k]).real());
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace olsmub
