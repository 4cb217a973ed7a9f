#pragma once

// Weyl-Schwinger operators and mutually unbiased bases aligned with net designs.
//
// A MubSet produced from a net is aligned: basis k belongs to net row k and
// its vector j to cell j of that row. Alignment works by the shifting
// experiment: pick one joint eigenvector of the row's commuting class as
// |0>, then |j> is U_l |0> for any label l in cell j.
//
// Which joint eigenvector serves as |0> (the anchor) is a convention. The
// candidates of a row are ranked by their eigenphase signature over the class
// members (angles in [0, 2pi), members in label order, lexicographic); the
// default anchor is rank 0. For prime d that is exactly the closed-form
// vector |0>_a. Census counts for d = 4 depend on this choice.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "olsmub/error.hpp"
#include "olsmub/gfield.hpp"
#include "olsmub/linalg.hpp"
#include "olsmub/nets.hpp"
#include "olsmub/numtheory.hpp"
#include "olsmub/squares.hpp"

namespace olsmub {

inline CMat weyl_z(int d) {
  if (d < 2) throw InvalidArgument("weyl_z: d must be >= 2");
  CMat z = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = root_of_unity(d, k);
  return z;
}

/// Cyclic shift |k> -> |k+1 mod d>.
inline CMat weyl_x(int d) {
  if (d < 2) throw InvalidArgument("weyl_x: d must be >= 2");
  CMat x = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

/// X^m Z^n as a d x d matrix: |k> -> eta^{n k} |k + m>.
inline CMat weyl_op(int m, int n, int d) {
  CMat s = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) s(mod(k + m, d), k) = root_of_unity(d, static_cast<long long>(n) * k);
  return s;
}

/// Exponent vectors over Z_p (p prime for field operators, or the cyclic modulus).
struct WeylIndex {
  std::vector<int> m;
  std::vector<int> n;

  bool operator==(const WeylIndex&) const = default;
};

/// X_p^{m_1} Z_p^{n_1} (x) ... (x) X_p^{m_r} Z_p^{n_r}, first factor leftmost.
inline CMat weyl_op(const WeylIndex& idx, int p) {
  if (idx.m.size() != idx.n.size() || idx.m.empty()) throw InvalidArgument("weyl_op: malformed index");
  CMat out = weyl_op(idx.m[0], idx.n[0], p);
  for (std::size_t i = 1; i < idx.m.size(); ++i) out = kron(out, weyl_op(idx.m[i], idx.n[i], p));
  return out;
}

/// m.n' - m'.n mod p; zero iff the two operators commute.
inline int symplectic_form(const WeylIndex& a, const WeylIndex& b, int p) {
  long long s = 0;
  for (std::size_t i = 0; i < a.m.size(); ++i)
    s += static_cast<long long>(a.m[i]) * b.n[i] - static_cast<long long>(b.m[i]) * a.n[i];
  return mod(s, p);
}

/// How ontic labels m*d+n become unitaries: either X_d^m Z_d^n, or the
/// tensor-product operators of the field decomposition of (m, n).
class LabelOperators {
 public:
  static LabelOperators cyclic(int d) {
    if (d < 2) throw InvalidArgument("LabelOperators: d must be >= 2");
    LabelOperators ops;
    ops.d_ = d;
    ops.modulus_ = d;
    return ops;
  }

  static LabelOperators field(FieldPtr f, FieldBasisPair pair) {
    LabelOperators ops;
    ops.d_ = f->order();
    ops.modulus_ = f->p();
    ops.field_ = std::move(f);
    ops.pair_ = std::move(pair);
    return ops;
  }

  static LabelOperators field(FieldPtr f) {
    auto pair = default_basis_pair(*f);
    return field(std::move(f), std::move(pair));
  }

  int d() const { return d_; }
  int modulus() const { return modulus_; }
  const FieldPtr& galois_field() const { return field_; }
  const std::optional<FieldBasisPair>& basis_pair() const { return pair_; }

  WeylIndex index(int label) const {
    const int m = label_m(label, d_);
    const int n = label_n(label, d_);
    if (!field_) return {{m}, {n}};
    return {decompose_m(*field_, m, *pair_), decompose_n(*field_, n, *pair_)};
  }

  CMat op(int label) const {
    if (!field_) return weyl_op(label_m(label, d_), label_n(label, d_), d_);
    return weyl_op(index(label), modulus_);
  }

  /// Column arithmetic that matches operator composition.
  int column_add(int a, int b) const { return field_ ? field_->add(a, b) : (a + b) % d_; }

 private:
  int d_ = 0;
  int modulus_ = 0;
  FieldPtr field_;
  std::optional<FieldBasisPair> pair_;
};

struct Basis {
  CMat vectors;  // orthonormal columns
  int label = 0;
};

struct Certification {
  double max_overlap_deviation = 0.0;
  double max_gram_deviation = 0.0;
  double tolerance = kTolerance;
  bool certified = false;
};

struct MubSet {
  int d = 0;
  std::vector<Basis> bases;
  Certification certification;
  std::vector<int> anchors;  // anchor rank per basis, empty when not net-aligned
};

inline double gram_deviation(const Basis& b) { return unitarity_deviation(b.vectors); }

/// max | |<i|j>|^2 - 1/d | across bases, max Gram deviation within bases.
inline Certification verify_mub(const MubSet& set, double tol = kTolerance) {
  Certification c;
  c.tolerance = tol;
  const double inv_d = 1.0 / set.d;
  for (const auto& b : set.bases) {
    if (b.vectors.rows() != set.d || b.vectors.cols() != set.d)
      throw DimensionMismatch("verify_mub: basis has the wrong dimension");
    c.max_gram_deviation = std::max(c.max_gram_deviation, gram_deviation(b));
  }
  for (std::size_t x = 0; x < set.bases.size(); ++x)
    for (std::size_t y = x + 1; y < set.bases.size(); ++y) {
      const CMat overlaps = set.bases[x].vectors.adjoint() * set.bases[y].vectors;
      const double dev = (overlaps.cwiseAbs2().array() - inv_d).abs().maxCoeff();
      c.max_overlap_deviation = std::max(c.max_overlap_deviation, dev);
    }
  c.certified = c.max_overlap_deviation <= tol && c.max_gram_deviation <= tol;
  return c;
}

/// |j>_a = d^{-1/2} sum_k eta^{-j k - a s_k} |k>, s_k = k + ... + (d-1): the
/// eigenbasis of X Z^a with Z |j>_a = |j-1>_a. For d = 2 the exponent is
/// -j k + a k(k-1)/2 - a k (d-1)/2, which needs the half-integer power of eta.
inline Basis eigenbasis_closed_form(int d, int a) {
  if (!is_prime(d)) throw NotPrime("eigenbasis_closed_form: " + std::to_string(d) + " is not prime");
  if (a < 1 || a >= d) throw InvalidArgument("eigenbasis_closed_form: a must be in 1..d-1");
  Basis b{CMat(d, d), a};
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double exponent;  // in units of 2 pi / d
      if (d % 2 == 1) {
        const long long s_k = static_cast<long long>(d) * (d - 1) / 2 - static_cast<long long>(k) * (k - 1) / 2;
        exponent = static_cast<double>(mod(-static_cast<long long>(j) * k - a * s_k, d));
      } else {
        exponent = -static_cast<double>(j) * k + a * k * (k - 1) / 2.0 - a * k * (d - 1) / 2.0;
      }
      b.vectors(k, j) = norm * std::polar(1.0, 2.0 * std::numbers::pi * exponent / d);
    }
  return b;
}

/// Eigenbasis of X: |j> = d^{-1/2} sum_k eta^{-j k} |k>, X|j> = eta^j |j>.
inline Basis fourier_basis(int d) {
  Basis b{CMat(d, d), 0};
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) b.vectors(k, j) = root_of_unity(d, -static_cast<long long>(j) * k) / std::sqrt(double(d));
  return b;
}

/// Index sets (b = 0 cell of every row) as Weyl indices; each class is
/// checked to be pairwise commuting under the symplectic form.
inline std::vector<std::vector<WeylIndex>> commuting_classes_from_net(const NetDesign& net, const LabelOperators& ops) {
  if (net.d != ops.d()) throw DimensionMismatch("commuting_classes_from_net: dimension mismatch");
  std::vector<std::vector<WeylIndex>> classes;
  for (const auto& row : net.rows) {
    std::vector<WeylIndex> cls;
    for (int l : row[0]) cls.push_back(ops.index(l));
    for (std::size_t x = 0; x < cls.size(); ++x)
      for (std::size_t y = x + 1; y < cls.size(); ++y)
        if (symplectic_form(cls[x], cls[y], ops.modulus()) != 0)
          throw ConstructionError("commuting class violates the symplectic condition");
    classes.push_back(std::move(cls));
  }
  return classes;
}

struct JointDiagonalizationOptions {
  std::uint64_t seed = 20080214;
  double commute_tol = kTolerance;
  double cluster_gap = 1e-7;
  double residual_tol = 1e-8;
};

namespace detail {

inline CMat random_hermitian_combination(const std::vector<CMat>& ops, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto n = ops.front().rows();
  CMat h = CMat::Zero(n, n);
  for (const auto& s : ops) {
    const double c = normal(rng);
    const double c2 = normal(rng);
    h += c * (s + s.adjoint()) + cplx(0.0, c2) * (s - s.adjoint());
  }
  return 0.5 * (h + h.adjoint());
}

}  // namespace detail

/// Orthonormal basis diagonalizing every member of a commuting family.
inline Basis joint_eigenbasis(const std::vector<CMat>& ops, const JointDiagonalizationOptions& opt = {}) {
  if (ops.empty()) throw InvalidArgument("joint_eigenbasis: empty family");
  for (std::size_t x = 0; x < ops.size(); ++x)
    for (std::size_t y = x + 1; y < ops.size(); ++y)
      if (commutator_norm(ops[x], ops[y]) > opt.commute_tol) throw NotCommuting("joint_eigenbasis: operators do not commute");

  std::mt19937_64 rng(opt.seed);
  const auto n = ops.front().rows();
  const CMat h = detail::random_hermitian_combination(ops, rng);
  auto eig = jacobi_eigh(h);
  CMat v = eig.vectors;

  // Re-split clusters of (near) degenerate eigenvalues with a second combination.
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && eig.values[end] - eig.values[end - 1] < opt.cluster_gap) ++end;
    if (end - start > 1) {
      const CMat sub = v.middleCols(start, end - start);
      const CMat h2 = detail::random_hermitian_combination(ops, rng);
      const auto inner = jacobi_eigh(sub.adjoint() * h2 * sub);
      v.middleCols(start, end - start) = sub * inner.vectors;
    }
    start = end;
  }

  for (Eigen::Index k = 0; k < n; ++k) fix_phase(v.col(k));
  for (const auto& s : ops) {
    CMat conj = v.adjoint() * s * v;
    conj.diagonal().setZero();
    if (max_abs(conj) > opt.residual_tol) throw ConstructionError("joint_eigenbasis: residual above tolerance");
  }
  return {v, 0};
}

/// Eigenphases of the class members on v, each in [0, 2pi).
inline std::vector<double> eigenphase_signature(const CVec& v, const std::vector<CMat>& members) {
  std::vector<double> sig;
  for (const auto& s : members) {
    double angle = std::arg(v.dot(s * v));
    if (angle < 0) angle += 2.0 * std::numbers::pi;
    if (angle > 2.0 * std::numbers::pi - 1e-7) angle = 0.0;
    sig.push_back(angle);
  }
  return sig;
}

inline bool signature_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-7) return a[k] < b[k];
  return false;
}

/// Columns of `candidates` ordered by eigenphase signature.
inline CMat rank_by_signature(const CMat& candidates, const std::vector<CMat>& members) {
  const auto n = candidates.cols();
  std::vector<std::pair<std::vector<double>, Eigen::Index>> keyed;
  for (Eigen::Index k = 0; k < n; ++k) keyed.emplace_back(eigenphase_signature(candidates.col(k), members), k);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return signature_less(x.first, y.first); });
  CMat out(candidates.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) out.col(k) = candidates.col(keyed[k].second);
  return out;
}

enum class MubRoute { ClosedForm, JointDiagonalization };

struct AlignmentOptions {
  std::vector<int> anchors;  // rank per row; missing entries mean 0
  MubRoute route = MubRoute::JointDiagonalization;
  JointDiagonalizationOptions joint;
  double tolerance = kTolerance;
};

/// Candidate eigenvectors for one row from the closed-form formulas (prime d).
inline CMat closed_form_candidates(const NetDesign& net, std::size_t row) {
  const int d = net.d;
  const auto& tag = net.tags.at(row);
  switch (tag.kind) {
    case RowKind::MEqualsB:
      return CMat::Identity(d, d);
    case RowKind::NEqualsB:
      return fourier_basis(d).vectors;
    case RowKind::Square:
      if (tag.multiplier < 1) throw InvalidArgument("closed form needs the row multiplier");
      return eigenbasis_closed_form(d, tag.multiplier).vectors;
  }
  throw InvalidArgument("unknown row kind");
}

/// One basis per net row, vector j aligned to cell j by the shifting experiment.
inline MubSet mubs_from_net(const NetDesign& net, const LabelOperators& ops, const AlignmentOptions& opt = {}) {
  if (net.d != ops.d()) throw DimensionMismatch("mubs_from_net: dimension mismatch");
  commuting_classes_from_net(net, ops);
  MubSet set;
  set.d = net.d;
  for (std::size_t r = 0; r < net.rows.size(); ++r) {
    std::vector<CMat> members;
    for (int l : net.rows[r][0]) members.push_back(ops.op(l));
    const CMat candidates = opt.route == MubRoute::ClosedForm ? closed_form_candidates(net, r)
                                                              : joint_eigenbasis(members, opt.joint).vectors;
    const CMat ranked = rank_by_signature(candidates, members);
    const int anchor = r < opt.anchors.size() ? opt.anchors[r] : 0;
    if (anchor < 0 || anchor >= net.d) throw InvalidArgument("anchor rank out of range");
    const CVec zero = ranked.col(anchor);

    Basis b{CMat(net.d, net.d), static_cast<int>(r)};
    for (int j = 0; j < net.d; ++j) {
      CVec v = ops.op(net.rows[r][j][0]) * zero;
      fix_phase(v);
      b.vectors.col(j) = v;
    }
    set.bases.push_back(std::move(b));
    set.anchors.push_back(anchor);
  }
  set.certification = verify_mub(set, opt.tolerance);
  return set;
}

/// The prime-power (or prime) net of GF(d) with its default field basis.
inline NetDesign field_net(const FieldPtr& f) { return net_from_ols(generate_ols_prime_power(*f)); }

/// Complete, net-aligned set of d+1 MUBs. Primes use the closed-form
/// eigenbases; prime powers the joint eigenbases of the commuting classes.
inline MubSet mubs_for(int d, AlignmentOptions opt = {}) {
  auto pr = prime_power(d);
  if (!pr) throw NotPrimePower(std::to_string(d) + " is not a prime power");
  auto f = GaloisField::create(d);
  const auto net = field_net(f);
  if (pr->second == 1 && opt.route == MubRoute::JointDiagonalization && opt.anchors.empty())
    opt.route = MubRoute::ClosedForm;
  if (pr->second > 1) opt.route = MubRoute::JointDiagonalization;
  return mubs_from_net(net, LabelOperators::field(f), opt);
}

/// Bases paired in order: (a_k (x) b_k) for k < min(|A|, |B|).
inline MubSet mub_tensor_product(const MubSet& a, const MubSet& b, double tol = kTolerance) {
  MubSet out;
  out.d = a.d * b.d;
  const auto count = std::min(a.bases.size(), b.bases.size());
  for (std::size_t k = 0; k < count; ++k)
    out.bases.push_back({kron(a.bases[k].vectors, b.bases[k].vectors), static_cast<int>(k)});
  out.certification = verify_mub(out, tol);
  return out;
}

/// min_i(p_i^{r_i} + 1) MUBs from tensor products over the prime-power factors.
inline MubSet mubs_macneish(int d, double tol = kTolerance) {
  if (d < 2) throw InvalidArgument("mubs_macneish: d must be >= 2");
  std::optional<MubSet> acc;
  for (const auto& f : factorize(d)) {
    auto factor = mubs_for(f.value);
    acc = acc ? mub_tensor_product(*acc, factor, tol) : factor;
  }
  acc->anchors.clear();
  acc->certification = verify_mub(*acc, tol);
  return *acc;
}

/// sum_j eta^{j xi} |j><j|
inline CMat s_operator(const Basis& b, int xi) {
  const auto d = static_cast<int>(b.vectors.rows());
  CMat out = CMat::Zero(d, d);
  for (int j = 0; j < d; ++j) out += root_of_unity(d, static_cast<long long>(j) * xi) * b.vectors.col(j) * b.vectors.col(j).adjoint();
  return out;
}

/// 1 + sum_m sum_{xi=1}^{d-1} eta^{n_m xi} S_m^xi, one tuple entry per basis.
inline CMat latin_operator(const MubSet& mubs, const std::vector<int>& tuple) {
  if (tuple.size() != mubs.bases.size()) throw DimensionMismatch("latin_operator: tuple length must equal the number of bases");
  const int d = mubs.d;
  CMat out = CMat::Identity(d, d);
  for (std::size_t m = 0; m < mubs.bases.size(); ++m)
    for (int xi = 1; xi < d; ++xi)
      out += root_of_unity(d, static_cast<long long>(tuple[m]) * xi) * s_operator(mubs.bases[m], xi);
  return out;
}

/// k = number of positions where the tuples agree.
inline int tuple_agreement(const std::vector<int>& a, const std::vector<int>& b) {
  int k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) k += a[i] == b[i];
  return k;
}

struct NetTuples {
  std::vector<std::vector<int>> tuples;  // tuples[label][row] = column
  bool complete = false;                 // false: fewer than d+1 rows, orthogonality not guaranteed
};

inline NetTuples tuples_from_net(const NetDesign& net) {
  NetTuples out;
  out.complete = net.complete();
  std::vector<ColumnFunction> fs;
  for (std::size_t r = 0; r < net.rows.size(); ++r) fs.push_back(column_function(net, static_cast<int>(r)));
  for (int l = 0; l < net.d * net.d; ++l) {
    std::vector<int> t;
    for (const auto& f : fs) t.push_back(f.table[l]);
    out.tuples.push_back(std::move(t));
  }
  return out;
}

struct ShiftReport {
  double max_deviation = 0.0;
  bool table_matches = false;
  NetDesign reconstructed;
};

/// |<j + F_a(m,n)| U_mn |j>_a| = 1 for all labels, rows and j; then rebuilds
/// the table by preparing |0>_a, applying U_mn and measuring in basis a.
inline ShiftReport verify_shifting(const NetDesign& net, const MubSet& mubs, const LabelOperators& ops) {
  if (mubs.bases.size() != net.rows.size()) throw DimensionMismatch("verify_shifting: one basis per net row expected");
  const int d = net.d;
  ShiftReport rep;
  rep.reconstructed.d = d;
  rep.reconstructed.tags = net.tags;
  rep.reconstructed.field_degree = net.field_degree;
  for (std::size_t a = 0; a < net.rows.size(); ++a) {
    const auto f = column_function(net, static_cast<int>(a));
    const CMat& basis = mubs.bases[a].vectors;
    NetRow row(d);
    for (int l = 0; l < d * d; ++l) {
      const CMat shifted = basis.adjoint() * ops.op(l) * basis;  // <i| U |j>
      for (int j = 0; j < d; ++j) {
        const int target = ops.column_add(j, f.table[l]);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(std::abs(shifted(target, j)) - 1.0));
      }
      Eigen::Index outcome;
      shifted.col(0).cwiseAbs2().maxCoeff(&outcome);
      row[outcome].push_back(l);
    }
    rep.reconstructed.rows.push_back(std::move(row));
  }
  rep.table_matches = rep.reconstructed.rows == net.rows;
  return rep;
}

}  // namespace olsmub
